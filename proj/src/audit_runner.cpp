#include "delaudit/audit_runner.hpp"

#include <json.hpp>

#include "delaudit/confidentiality.hpp"
#include "delaudit/deletion_game.hpp"
#include "delaudit/errors.hpp"
#include "delaudit/registry.hpp"

namespace delaudit {

namespace {

using nlohmann::json;

Params params_from(const json& j) {
  Params p;
  p.name = j.at("name").get<std::string>();
  if (j.contains("eps")) p.eps = j.at("eps").get<double>();
  if (j.contains("delta")) p.delta = j.at("delta").get<double>();
  if (j.contains("k")) p.k = j.at("k").get<int>();
  if (j.contains("T")) p.horizon = j.at("T").get<int>();
  if (j.contains("B")) p.bound = j.at("B").get<int>();
  if (j.contains("w")) p.draw_width = j.at("w").get<int>();
  if (j.contains("contacts")) p.contacts = j.at("contacts").get<int>();
  if (j.contains("leak_bits")) p.leak_bits = j.at("leak_bits").get<int>();
  if (j.contains("ops")) p.ops = j.at("ops").get<int>();
  if (j.contains("seed")) p.seed = j.at("seed").get<uint64_t>();
  if (j.contains("ticks")) p.ticks = j.at("ticks").get<int>();
  return p;
}

struct CommonOptions {
  bool exact = true;
  uint64_t trials = 2000;
  double confidence = 0.95;
  uint64_t seed = 1;
  uint64_t max_steps = 10000;
  uint64_t enumeration_cap = 1u << 22;
  uint64_t attempt_cap = 64;
};

CommonOptions common_from(const json& cfg) {
  CommonOptions o;
  if (cfg.contains("mode")) o.exact = cfg.at("mode").get<std::string>() == "exact";
  if (cfg.contains("trials")) o.trials = cfg.at("trials").get<uint64_t>();
  if (cfg.contains("confidence")) o.confidence = cfg.at("confidence").get<double>();
  if (cfg.contains("seed")) o.seed = cfg.at("seed").get<uint64_t>();
  if (cfg.contains("max_steps")) o.max_steps = cfg.at("max_steps").get<uint64_t>();
  if (cfg.contains("enumeration_cap")) {
    o.enumeration_cap = cfg.at("enumeration_cap").get<uint64_t>();
  }
  if (cfg.contains("attempt_cap")) o.attempt_cap = cfg.at("attempt_cap").get<uint64_t>();
  return o;
}

json closeness_json(const ClosenessReport& r) { return json::parse(r.to_json()); }

json run_control(const json& cfg) {
  Params cp = params_from(cfg.at("controller"));
  ControllerSpec ctrl = make_controller(cp);
  const Fixture& fx = fixture_by_name(cfg.at("fixture").get<std::string>());
  CommonOptions common = common_from(cfg);

  std::string sim_name =
      cfg.contains("simulator") ? cfg.at("simulator").get<std::string>() : "default";
  auto sim = make_simulator(sim_name, &ctrl, common.max_steps, common.attempt_cap);

  DeletionAuditOptions opt;
  opt.exact = common.exact;
  opt.enumeration_cap = common.enumeration_cap;
  opt.attempt_cap = common.attempt_cap;
  opt.trials = common.trials;
  opt.confidence = common.confidence;
  opt.seed = common.seed;
  opt.max_steps = common.max_steps;

  double eps = cfg.at("eps").get<double>();
  double delta = cfg.at("delta").get<double>();
  if (cfg.value("add_tail_deficit", false)) delta += ctrl.tail_deficit;

  auto report = audit_deletion_as_control(ctrl, fx.env, fx.subj, *sim, eps, delta, opt);
  json body = json::parse(report.to_json());
  body["controller"] = ctrl.name;
  body["fixture"] = fx.name;
  body["simulator"] = sim_name;
  body["tail_deficit"] = ctrl.tail_deficit;
  return body;
}

json run_confidentiality(const json& cfg) {
  Params cp = params_from(cfg.at("controller"));
  ControllerSpec ctrl = make_controller(cp);
  const Fixture& fx = fixture_by_name(cfg.at("fixture").get<std::string>());
  CommonOptions common = common_from(cfg);

  ConfidentialityAuditOptions opt;
  opt.exact = common.exact;
  opt.enumeration_cap = common.enumeration_cap;
  opt.trials = common.trials;
  opt.confidence = common.confidence;
  opt.seed = common.seed;
  opt.max_steps = common.max_steps;

  double eps = cfg.at("eps").get<double>();
  double delta = cfg.at("delta").get<double>();
  if (cfg.value("add_tail_deficit", false)) delta += ctrl.tail_deficit;

  auto report = audit_confidentiality(ctrl, fx.env, fx.subj, eps, delta, opt);
  json body;
  body["cond1"] = closeness_json(report);
  body["passed"] = report.passed;
  body["method"] = report.method;
  body["controller"] = ctrl.name;
  body["fixture"] = fx.name;
  body["eps"] = eps;
  body["delta"] = delta;
  body["seed"] = common.seed;
  body["tail_deficit"] = ctrl.tail_deficit;
  return body;
}

json run_ahi_audit(const json& cfg) {
  Params ip = params_from(cfg.at("impl"));
  ImplSpec impl = make_impl(ip);
  Params ap = params_from(cfg.at("adversary"));
  auto adversary = make_ahi_adversary(ap, impl.adt);
  CommonOptions common = common_from(cfg);

  AhiAuditOptions opt;
  opt.variant = cfg.value("variant", std::string("identical")) == "fresh"
                    ? AhiVariant::kFresh
                    : AhiVariant::kIdentical;
  opt.exact = common.exact;
  opt.enumeration_cap = common.enumeration_cap;
  opt.trials = common.trials;
  opt.confidence = common.confidence;
  opt.seed = common.seed;

  double eps = cfg.at("eps").get<double>();
  double delta = cfg.at("delta").get<double>();
  auto report = audit_ahi(impl, adversary, eps, delta, opt);
  json body;
  body["cond1"] = closeness_json(report);
  body["passed"] = report.passed;
  body["method"] = report.method;
  body["impl"] = impl.name;
  body["adversary"] = ap.name;
  body["variant"] = ahi_variant_name(opt.variant);
  body["eps"] = eps;
  body["delta"] = delta;
  body["seed"] = common.seed;
  return body;
}

json run_pp_audit(const json& cfg) {
  Params mp = params_from(cfg.at("mechanism"));
  MechanismSpec mech = make_mechanism(mp);
  Params ap = params_from(cfg.at("adversary"));
  auto adversary = make_pp_adversary(ap);
  CommonOptions common = common_from(cfg);

  PpAuditOptions opt;
  opt.exact = common.exact;
  opt.enumeration_cap = common.enumeration_cap;
  opt.trials = common.trials;
  opt.confidence = common.confidence;
  opt.seed = common.seed;

  double eps = cfg.at("eps").get<double>();
  double delta = cfg.at("delta").get<double>();
  if (cfg.value("add_tail_deficit", false)) delta += mech.tail_deficit;

  auto report = audit_pp(mech, adversary, eps, delta, opt);
  json body;
  body["cond1"] = closeness_json(report);
  body["passed"] = report.passed;
  body["method"] = report.method;
  body["mechanism"] = mech.name;
  body["adversary"] = ap.name;
  body["eps"] = eps;
  body["delta"] = delta;
  body["seed"] = common.seed;
  body["tail_deficit"] = mech.tail_deficit;
  return body;
}

}  // namespace

AuditResult run_audit_config(const std::string& config_json) {
  json cfg = json::parse(config_json);
  std::string definition = cfg.at("definition").get<std::string>();

  json body;
  if (definition == "control") {
    body = run_control(cfg);
  } else if (definition == "confidentiality") {
    body = run_confidentiality(cfg);
  } else if (definition == "ahi") {
    body = run_ahi_audit(cfg);
  } else if (definition == "pan_privacy") {
    body = run_pp_audit(cfg);
  } else {
    throw ConfigError("unknown definition: " + definition);
  }

  body["definition"] = definition;
  body["config"] = cfg;

  AuditResult result;
  result.passed = body.at("passed").get<bool>();
  result.report_json = body.dump(2) + "\n";
  return result;
}

bool replay_report(const std::string& report_json, std::string* recomputed) {
  json report = json::parse(report_json);
  AuditResult again = run_audit_config(report.at("config").dump());
  if (recomputed) *recomputed = again.report_json;
  return again.report_json == report_json;
}

}  // namespace delaudit

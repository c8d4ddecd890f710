#include "delaudit/deletion_game.hpp"

#include <cmath>
#include <unordered_map>

#include <json.hpp>

namespace delaudit {

namespace {

RealParties parties_of(const ControllerSpec& ctrl, const EnvSpec& env, const SubjSpec& subj) {
  RealParties p;
  p.controller = ctrl.make;
  p.environment = env.make;
  p.subject = subj.make;
  p.env_channels = env.env_channels;
  return p;
}

RealTapes tapes_for(const ControllerSpec& ctrl, uint64_t ctrl_seed) {
  RealTapes t;
  t.controller = RandomTape(ctrl_seed, ctrl.layout.total_bits());
  t.environment = RandomTape(0, 0);  // fixtures are deterministic
  t.subject = RandomTape(0, 0);
  return t;
}

}  // namespace

DeletionTrial run_deletion_experiment(const ControllerSpec& ctrl, const EnvSpec& env,
                                      const SubjSpec& subj, Simulator& sim, uint64_t seed,
                                      uint64_t max_steps) {
  Rng rng(seed);
  DeletionTrial trial;
  RealTapes tapes = tapes_for(ctrl, rng.next());
  trial.real = run_real(parties_of(ctrl, env, subj), tapes, max_steps);
  trial.q_e = project_queries(trial.real.transcript);

  SimSample sample =
      sim.sample(trial.q_e, tapes.controller, trial.real.controller_state.value_or(Bytes()),
                 rng);
  trial.sim_fallback = sample.fallback;
  trial.sim_inconclusive = sample.inconclusive;
  trial.ideal_tape = sample.tape;
  trial.ideal = run_ideal(ctrl.make, trial.q_e, trial.ideal_tape, max_steps);

  if (trial.real.is_bottom()) {
    trial.state_match = true;  // the bottom escape clause
  } else if (trial.sim_inconclusive) {
    trial.state_match = false;  // conservative
  } else {
    trial.state_match = trial.ideal.controller_state.has_value() &&
                        *trial.ideal.controller_state == *trial.real.controller_state;
  }
  return trial;
}

DeletionAuditReport audit_deletion_as_control(const ControllerSpec& ctrl, const EnvSpec& env,
                                              const SubjSpec& subj, Simulator& sim,
                                              double eps, double delta,
                                              const DeletionAuditOptions& opt) {
  DeletionAuditReport report;
  report.eps = eps;
  report.delta = delta;
  report.seed = opt.seed;

  if (opt.exact) {
    report.method = "exact";
    ExactContext ctx(&ctrl, opt.max_steps, opt.enumeration_cap);
    const size_t space = ctx.space();

    // Real runs across the whole tape space.
    std::vector<Bytes> real_states(space);
    std::vector<bool> real_bottom(space, false);
    std::vector<Bytes> qe_keys(space);
    std::vector<QuerySeq> qe_per_index(space);
    for (size_t i = 0; i < space; ++i) {
      RealTapes tapes;
      tapes.controller = ctrl.layout.tape_for(ctx.vectors()[i]);
      tapes.environment = RandomTape(0, 0);
      tapes.subject = RandomTape(0, 0);
      auto outcome = run_real(parties_of(ctrl, env, subj), tapes, opt.max_steps);
      real_bottom[i] = outcome.is_bottom();
      real_states[i] = outcome.controller_state.value_or(Bytes());
      qe_per_index[i] = project_queries(outcome.transcript);
      qe_keys[i] = encode_query_seq(qe_per_index[i]);
    }

    // cond1: mix the per-run simulator laws into the law of R'.
    std::vector<Rat> law(space, Rat(0));
    Rat match_mass(0), fallback_mass(0);
    for (size_t i = 0; i < space; ++i) {
      ExactLaw sim_law = sim.exact_law(qe_per_index[i], i, real_states[i], ctx);
      if (sim_law.fallback) fallback_mass += ctx.weight(i);
      const auto& ideal_states = ctx.ideal_states(qe_per_index[i]);
      Rat match_given_run(0);
      for (const auto& [idx, mass] : sim_law.atoms) {
        law[idx] += ctx.weight(i) * mass;
        if (real_bottom[i] || ideal_states[idx] == real_states[i]) {
          match_given_run += mass;
        }
      }
      match_mass += ctx.weight(i) * match_given_run;
    }

    std::vector<std::pair<Bytes, Rat>> law_atoms, ref_atoms;
    law_atoms.reserve(space);
    ref_atoms.reserve(space);
    for (size_t i = 0; i < space; ++i) {
      Bytes key = ctrl.layout.key_of(ctx.vectors()[i]);
      if (!law[i].is_zero()) law_atoms.emplace_back(key, law[i]);
      ref_atoms.emplace_back(std::move(key), ctx.weight(i));
    }
    report.cond1 = check_indisting(FinitePmf::from_atoms(std::move(law_atoms)),
                                   FinitePmf::from_atoms(std::move(ref_atoms)), eps, delta);
    report.cond2_rate = match_mass.to_double();
    report.cond2_lower_bound = report.cond2_rate;
    report.cond2_passed = match_mass >= Rat(1) - Rat::from_double_exact(delta);
    report.fallback_weight = fallback_mass.to_double();
    report.passed = report.cond1.passed && report.cond2_passed;
    return report;
  }

  report.method = "sampled";
  report.trials = opt.trials;
  Rng rng(opt.seed);

  uint64_t matches = 0, inconclusive = 0, fallbacks = 0;
  for (uint64_t t = 0; t < opt.trials; ++t) {
    auto trial = run_deletion_experiment(ctrl, env, subj, sim, rng.child(t).next(),
                                         opt.max_steps);
    if (trial.state_match) ++matches;
    if (trial.sim_inconclusive) ++inconclusive;
    if (trial.sim_fallback) ++fallbacks;
  }
  report.cond2_rate = static_cast<double>(matches) / opt.trials;
  double hoeffding = std::sqrt(std::log(1.0 / (1 - opt.confidence)) / (2.0 * opt.trials));
  report.cond2_lower_bound = std::max(0.0, report.cond2_rate - hoeffding);
  report.cond2_passed = report.cond2_lower_bound >= 1 - delta;
  report.inconclusive_weight = static_cast<double>(inconclusive) / opt.trials;
  report.fallback_weight = static_cast<double>(fallbacks) / opt.trials;

  // cond1: empirical law of the simulated tape's draws vs fresh tapes.
  Rng rng_p = rng.child("cond1-law");
  auto law_sampler = [&](Rng& r) {
    auto trial = run_deletion_experiment(ctrl, env, subj, sim, r.next(), opt.max_steps);
    if (trial.sim_inconclusive) return Bytes("\x00INCONCLUSIVE", 13);
    return ctrl.layout.key_of(ctrl.layout.draws_of_tape(trial.ideal_tape));
  };
  auto ref_sampler = [&](Rng& r) {
    RandomTape fresh(r.next(), ctrl.layout.total_bits());
    return ctrl.layout.key_of(ctrl.layout.draws_of_tape(fresh));
  };
  EstimateOptions eo;
  eo.trials = opt.trials;
  eo.confidence = opt.confidence;
  eo.seed = rng_p.next();
  report.cond1 = estimate_indisting(law_sampler, ref_sampler, eps, delta, eo);
  report.passed = report.cond1.passed && report.cond2_passed;
  return report;
}

std::string DeletionAuditReport::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["delta"] = delta;
  j["cond1"] = nlohmann::json::parse(cond1.to_json());
  j["cond2"] = {{"rate", cond2_rate},
                {"lower_bound", cond2_lower_bound},
                {"passed", cond2_passed}};
  j["passed"] = passed;
  j["method"] = method;
  j["trials"] = trials;
  j["seed"] = seed;
  j["fallback_weight"] = fallback_weight;
  j["inconclusive_weight"] = inconclusive_weight;
  return j.dump();
}

}  // namespace delaudit

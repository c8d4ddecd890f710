#include <doctest.h>

#include "delaudit/confidentiality.hpp"
#include "delaudit/deletion_game.hpp"

using namespace delaudit;

TEST_CASE("write-only shi dictionary: real and ideal environment views coincide") {
  auto ctrl = sorted_dict_controller_spec();
  const auto& fx = fixture_by_name("dict_writer");
  auto trial = run_confidentiality_experiment(ctrl, fx.env, fx.subj, 7, 1000, true);
  CHECK(trial.real.env_view == trial.ideal.env_view);
  CHECK(trial.joint_equal);

  ConfidentialityAuditOptions opt;
  CHECK(audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 0.0, opt).passed);
}

TEST_CASE("bulletin board with a reading environment differs across worlds") {
  auto ctrl = bulletin_board_controller_spec();
  const auto& fx = fixture_by_name("bulletin_reader");
  auto trial = run_confidentiality_experiment(ctrl, fx.env, fx.subj, 3, 1000, true);
  CHECK(trial.real.env_view != trial.ideal.env_view);

  ConfidentialityAuditOptions opt;
  auto report = audit_confidentiality(ctrl, fx.env, fx.subj, 3.0, 0.9, opt);
  CHECK_FALSE(report.passed);
  CHECK(report.delta_forward == 1.0);
}

TEST_CASE("cloud storage passes confidentiality at (0,0)") {
  auto ctrl = cloud_storage_controller_spec();
  ConfidentialityAuditOptions opt;
  for (const auto& fxname : fixtures_for_family("cloud")) {
    const auto& fx = fixture_by_name(fxname);
    CHECK(audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 0.0, opt).passed);
  }
}

TEST_CASE("chatty subjects are rejected from silent-class audits") {
  auto ctrl = ignore_delete_controller_spec();
  const auto& trigger = fixture_by_name("blacklist_trigger");
  CHECK_THROWS_AS(
      run_confidentiality_experiment(ctrl, trigger.env, trigger.subj, 1, 1000, true),
      SubjectClassError);
}

TEST_CASE("ignore-delete controller passes confidentiality for silent subjects") {
  auto ctrl = ignore_delete_controller_spec();
  const auto& fx = fixture_by_name("blacklist_quiet");
  ConfidentialityAuditOptions opt;
  CHECK(audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 0.0, opt).passed);
}

TEST_CASE("timing controller: state pairs differ with probability exactly 1/T") {
  const int T = 8;
  auto ctrl = timing_controller_spec(T, 2);
  const auto& fx = fixture_by_name("timing_silent");
  ConfidentialityAuditOptions opt;
  auto report = audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 1.0 / T, opt);
  CHECK(report.passed);
  CHECK(report.delta_forward == doctest::Approx(1.0 / T).epsilon(1e-12));
  // Strictly tighter budgets fail: the divergence is exactly 1/T.
  CHECK_FALSE(audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 1.0 / T - 1e-9, opt).passed);
}

TEST_CASE("batch controller: confidentiality tracks the mechanism's privacy") {
  auto ctrl = batch_controller_spec(noisy_count_mechanism(1.0, 16, 10));
  const auto& fx = fixture_by_name("batch_tick");
  ConfidentialityAuditOptions opt;
  auto report =
      audit_confidentiality(ctrl, fx.env, fx.subj, 1.0, 0.01 + ctrl.tail_deficit, opt);
  CHECK(report.passed);
  // At epsilon 0 with a tiny delta the shifted counts are distinguishable.
  CHECK_FALSE(audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 0.01, opt).passed);
}

TEST_CASE("confidentiality implies control on lift fixtures (theorem spot check)") {
  DeletionAuditOptions dopt;
  ConfidentialityAuditOptions copt;
  auto check_pair = [&](const ControllerSpec& ctrl, const std::string& fxname) {
    const auto& fx = fixture_by_name(fxname);
    REQUIRE(fx.subj.silent);
    REQUIRE(fx.subj.lift);
    auto conf = audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 0.01, copt);
    if (!conf.passed) return;
    auto sim = default_simulator(&ctrl, dopt.max_steps, dopt.attempt_cap);
    auto control = audit_deletion_as_control(ctrl, fx.env, fx.subj, *sim, 0.0, 0.01, dopt);
    CHECK_MESSAGE(control.passed, ctrl.name, "/", fxname);
  };
  check_pair(sorted_dict_controller_spec(), "dict_writer");
  check_pair(cloud_storage_controller_spec(), "cloud_basic");
  check_pair(bulletin_board_controller_spec(), "bulletin_writer");

  auto sampled = estimate_indisting(  // keep the sampled plumbing exercised
      [](Rng& r) { return Bytes(1, char('a' + r.below(2))); },
      [](Rng& r) { return Bytes(1, char('a' + r.below(2))); }, 0.0, 0.05,
      EstimateOptions{2000, 0.9, 100, 4});
  CHECK(sampled.passed);
}

TEST_CASE("sampled confidentiality mode works") {
  auto ctrl = sorted_dict_controller_spec();
  const auto& fx = fixture_by_name("dict_writer");
  ConfidentialityAuditOptions opt;
  opt.exact = false;
  opt.trials = 1200;
  auto report = audit_confidentiality(ctrl, fx.env, fx.subj, 0.0, 0.02, opt);
  CHECK(report.method == "sampled");
  CHECK(report.passed);
}

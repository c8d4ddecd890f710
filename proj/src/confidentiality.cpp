#include "delaudit/confidentiality.hpp"

#include <unordered_map>

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

Bytes joint_key(const GgvOutcome& out) {
  return enc::pair(out.env_view,
                   out.controller_state ? *out.controller_state : Bytes("\x00BOTTOM", 7));
}

}  // namespace

ConfidentialityTrial run_confidentiality_experiment(const ControllerSpec& ctrl,
                                                    const EnvSpec& env, const SubjSpec& subj,
                                                    uint64_t seed, uint64_t max_steps,
                                                    bool enforce_silent_subject) {
  ConfidentialityTrial trial;
  RealTapes tapes;
  tapes.controller = RandomTape(seed, ctrl.layout.total_bits());
  tapes.environment = RandomTape(0, 0);
  tapes.subject = RandomTape(0, 0);
  trial.real = run_ggv(parties_of(ctrl, env, subj), tapes, max_steps, false,
                       enforce_silent_subject);
  // The ideal world has its own controller randomness; derive a fresh tape.
  tapes.controller = RandomTape(splitmix64(seed ^ 0x1dea1ULL), ctrl.layout.total_bits());
  trial.ideal = run_ggv(parties_of(ctrl, env, subj), tapes, max_steps, true,
                        enforce_silent_subject);
  trial.joint_equal = joint_key(trial.real) == joint_key(trial.ideal);
  return trial;
}

ClosenessReport audit_confidentiality(const ControllerSpec& ctrl, const EnvSpec& env,
                                      const SubjSpec& subj, double eps, double delta,
                                      const ConfidentialityAuditOptions& opt) {
  auto parties = parties_of(ctrl, env, subj);
  if (opt.exact) {
    ctrl.layout.space_size(opt.enumeration_cap);
    std::unordered_map<Bytes, Rat> real_atoms, ideal_atoms;
    LayoutEnumerator en(ctrl.layout);
    DrawVector v;
    while (en.next(&v)) {
      Rat w = ctrl.layout.weight(v);
      RealTapes tapes;
      tapes.environment = RandomTape(0, 0);
      tapes.subject = RandomTape(0, 0);
      tapes.controller = ctrl.layout.tape_for(v);
      real_atoms[joint_key(run_ggv(parties, tapes, opt.max_steps, false,
                                   opt.enforce_silent_subject))] += w;
      tapes.controller = ctrl.layout.tape_for(v);
      ideal_atoms[joint_key(run_ggv(parties, tapes, opt.max_steps, true,
                                    opt.enforce_silent_subject))] += w;
    }
    std::vector<std::pair<Bytes, Rat>> ra(real_atoms.begin(), real_atoms.end());
    std::vector<std::pair<Bytes, Rat>> ia(ideal_atoms.begin(), ideal_atoms.end());
    return check_indisting(FinitePmf::from_atoms(std::move(ra)),
                           FinitePmf::from_atoms(std::move(ia)), eps, delta);
  }

  uint64_t bits = ctrl.layout.total_bits();
  auto sampler = [&](bool ideal) {
    return [&, ideal](Rng& rng) {
      RealTapes tapes;
      tapes.environment = RandomTape(0, 0);
      tapes.subject = RandomTape(0, 0);
      tapes.controller = RandomTape(rng.next(), bits);
      return joint_key(
          run_ggv(parties, tapes, opt.max_steps, ideal, opt.enforce_silent_subject));
    };
  };
  EstimateOptions eo;
  eo.trials = opt.trials;
  eo.confidence = opt.confidence;
  eo.seed = opt.seed;
  return estimate_indisting(sampler(false), sampler(true), eps, delta, eo);
}

}  // namespace delaudit

#pragma once

#include "delaudit/confidentiality_exec.hpp"
#include "delaudit/simulators.hpp"

namespace delaudit {

struct ConfidentialityTrial {
  GgvOutcome real;
  GgvOutcome ideal;
  bool joint_equal = false;
};

// One paired run of the real and subject-suppressed executions.
ConfidentialityTrial run_confidentiality_experiment(const ControllerSpec& ctrl,
                                                    const EnvSpec& env, const SubjSpec& subj,
                                                    uint64_t seed, uint64_t max_steps,
                                                    bool enforce_silent_subject);

struct ConfidentialityAuditOptions {
  bool exact = true;
  uint64_t enumeration_cap = 1u << 22;
  uint64_t trials = 2000;
  double confidence = 0.95;
  uint64_t seed = 1;
  uint64_t max_steps = 10000;
  bool enforce_silent_subject = true;
};

// Closeness of (V_E, state_C) across the real and ideal worlds.
ClosenessReport audit_confidentiality(const ControllerSpec& ctrl, const EnvSpec& env,
                                      const SubjSpec& subj, double eps, double delta,
                                      const ConfidentialityAuditOptions& opt);

}  // namespace delaudit

#pragma once

#include "delaudit/simulators.hpp"

namespace delaudit {

// One run of the deletion-as-control experiment: real execution, simulated
// ideal randomness, ideal execution, and the raw material of both
// conditions.
struct DeletionTrial {
  ExecutionOutcome real;
  QuerySeq q_e;
  RandomTape ideal_tape;
  ExecutionOutcome ideal;
  bool state_match = false;  // state' == state, or real state bottom
  bool sim_fallback = false;
  bool sim_inconclusive = false;
};

DeletionTrial run_deletion_experiment(const ControllerSpec& ctrl, const EnvSpec& env,
                                      const SubjSpec& subj, Simulator& sim, uint64_t seed,
                                      uint64_t max_steps);

struct DeletionAuditOptions {
  bool exact = true;
  uint64_t enumeration_cap = 1u << 22;
  uint64_t attempt_cap = 64;
  uint64_t trials = 2000;  // sampled mode
  double confidence = 0.95;
  uint64_t seed = 1;
  uint64_t max_steps = 10000;
};

struct DeletionAuditReport {
  double eps = 0;
  double delta = 0;
  ClosenessReport cond1;         // law(R') vs uniform
  double cond2_rate = 0;         // state-match probability
  double cond2_lower_bound = 0;  // equals the rate in exact mode
  bool cond2_passed = false;
  bool passed = false;
  std::string method;
  uint64_t trials = 0;
  uint64_t seed = 0;
  double fallback_weight = 0;
  double inconclusive_weight = 0;

  std::string to_json() const;
};

// Both conditions of the deletion-as-control definition against one fixture:
// cond1 compares the simulated randomness law with the uniform tape law at
// (eps, delta); cond2 requires state agreement with probability 1 - delta.
// Inconclusive simulator outcomes count as failures.
DeletionAuditReport audit_deletion_as_control(const ControllerSpec& ctrl, const EnvSpec& env,
                                              const SubjSpec& subj, Simulator& sim,
                                              double eps, double delta,
                                              const DeletionAuditOptions& opt);

}  // namespace delaudit

#pragma once

#include <map>
#include <memory>

#include "delaudit/controllers.hpp"
#include "delaudit/fixtures.hpp"
#include "delaudit/pmf.hpp"

namespace delaudit {

// Shared machinery for exact-mode audits: the controller's draw space in
// enumeration order, and cached ideal-run states per query sequence.
class ExactContext {
 public:
  ExactContext(const ControllerSpec* ctrl, uint64_t max_steps, uint64_t enumeration_cap);

  const ControllerSpec& ctrl() const { return *ctrl_; }
  uint64_t max_steps() const { return max_steps_; }
  size_t space() const { return vectors_.size(); }
  const std::vector<DrawVector>& vectors() const { return vectors_; }
  const Rat& weight(size_t index) const { return weights_[index]; }
  size_t index_of(const DrawVector& v) const;

  // Ideal-run states for every draw vector under the given query sequence.
  const std::vector<Bytes>& ideal_states(const QuerySeq& q_e);
  // The same table grouped by state: one pass instead of one scan per state.
  const std::map<Bytes, std::vector<size_t>>& ideal_state_groups(const QuerySeq& q_e);

 private:
  const ControllerSpec* ctrl_;
  uint64_t max_steps_;
  std::vector<DrawVector> vectors_;
  std::vector<Rat> weights_;
  std::map<Bytes, std::vector<Bytes>> ideal_cache_;  // keyed by encoded q_E
  std::map<Bytes, std::map<Bytes, std::vector<size_t>>> group_cache_;
};

Bytes encode_query_seq(const QuerySeq& q_e);

// Sparse law over draw-space indices, plus the flags the audits report.
struct ExactLaw {
  std::vector<std::pair<size_t, Rat>> atoms;
  bool fallback = false;
};

struct SimSample {
  RandomTape tape;
  bool fallback = false;
  bool inconclusive = false;
};

// Produces the controller's ideal-world randomness from (q_E, real tape,
// real state): a finite set of overrides on a base tape.
class Simulator {
 public:
  virtual ~Simulator() = default;
  virtual std::string name() const = 0;
  virtual SimSample sample(const QuerySeq& q_e, const RandomTape& real_tape,
                           const Bytes& state, Rng& rng) = 0;
  virtual ExactLaw exact_law(const QuerySeq& q_e, size_t real_index, const Bytes& state,
                             ExactContext& ctx) = 0;
};

using SimulatorPtr = std::unique_ptr<Simulator>;

// R' = R. Sufficient for every strongly history independent controller.
SimulatorPtr identity_simulator();

// The closed-form witness for the xor controller: R' = state XOR x_E.
SimulatorPtr xor_analytic_simulator(int k_bits);

// Samples R' uniformly conditioned on the ideal run reproducing the real
// state; falls back to R' = R when the conditional event is empty, and
// reports inconclusive when rejection sampling exhausts its attempt cap.
SimulatorPtr default_simulator(const ControllerSpec* ctrl, uint64_t max_steps,
                               uint64_t attempt_cap);

// The two-branch simulator for batch controllers: the identity before any
// tick, conditional noise inversion afterwards with a uniform-tape fallback.
SimulatorPtr batch_simulator(const ControllerSpec* ctrl, uint64_t max_steps,
                             uint64_t attempt_cap);

// For parallel compositions: conditional on the first half's state over the
// first half's tape region, identity on the second half's region.
SimulatorPtr paired_simulator(const ControllerSpec* composed, uint64_t max_steps,
                              uint64_t attempt_cap);

// Named lookup used by the CLI config.
SimulatorPtr make_simulator(const std::string& name, const ControllerSpec* ctrl,
                            uint64_t max_steps, uint64_t attempt_cap);

}  // namespace delaudit

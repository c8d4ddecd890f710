#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "delaudit/bytes.hpp"
#include "delaudit/rational.hpp"
#include "delaudit/rng.hpp"

namespace delaudit {

// Explicit discrete distribution over byte-string atoms. Masses are exact
// rationals so pass/fail at tight delta never hinges on float rounding;
// the statistical path (estimate_indisting) works on doubles internally.
class FinitePmf {
 public:
  FinitePmf() = default;

  // Atoms need not be pre-sorted; duplicate values are summed.
  static FinitePmf from_atoms(std::vector<std::pair<Bytes, Rat>> atoms);
  static FinitePmf from_counts(const std::unordered_map<Bytes, uint64_t>& counts,
                               uint64_t denominator);
  static FinitePmf point_mass(const Bytes& value);

  const std::vector<std::pair<Bytes, Rat>>& atoms() const { return atoms_; }
  size_t support_size() const { return atoms_.size(); }
  Rat mass_of(const Bytes& value) const;
  Rat total_mass() const;

  // Sums to 1 exactly (rational arithmetic).
  bool is_normalized() const;
  FinitePmf normalized() const;

  // Conditional distribution given a predicate; nullopt if the event has
  // zero mass.
  std::optional<FinitePmf> conditioned_on(
      const std::function<bool(const Bytes&)>& event) const;

  // Pushforward under a (not necessarily injective) map.
  FinitePmf map_atoms(const std::function<Bytes(const Bytes&)>& f) const;

  Bytes sample(Rng& rng) const;

  std::string to_json() const;  // [{value_hex, mass}], canonical atom order

 private:
  std::vector<std::pair<Bytes, Rat>> atoms_;  // sorted by value, masses > 0
};

struct ClosenessReport {
  double eps = 0;
  double delta_forward = 0;
  double delta_backward = 0;
  bool passed = false;
  std::string method;  // "exact" | "sampled"
  double confidence = 0;  // sampled mode only
  uint64_t trials = 0;    // sampled mode only

  std::string to_json() const;
};

// Smallest admissible delta in the forward direction of Def-style
// (eps, delta)-indistinguishability: sum_x max(0, P(x) - e^eps Q(x)).
// Exact rational arithmetic; for eps > 0 the factor e^eps is rounded toward
// zero so the result can only over-estimate the true divergence (by < 2^-60).
Rat hockey_stick_exact(const FinitePmf& p, const FinitePmf& q, double eps);
double hockey_stick(const FinitePmf& p, const FinitePmf& q, double eps);

// Exact two-directional check: passed iff both hockey-stick values <= delta.
ClosenessReport check_indisting(const FinitePmf& p, const FinitePmf& q, double eps,
                                double delta);

using Sampler = std::function<Bytes(Rng&)>;

struct EstimateOptions {
  uint64_t trials = 100000;    // >= 1000
  double confidence = 0.95;    // in (0,1)
  int bootstrap_resamples = 200;
  uint64_t seed = 1;
};

// Statistical surrogate for check_indisting on supports too large to
// enumerate: empirical pmfs over observed outcomes, plug-in hockey-stick,
// one-sided upper confidence bound via bootstrap resampling.
ClosenessReport estimate_indisting(const Sampler& sampler_p, const Sampler& sampler_q,
                                   double eps, double delta, const EstimateOptions& opt);

// Plug-in hockey-stick between two weighted count vectors (float fast path
// used inside the bootstrap loop). Counts are over a shared outcome index.
double hockey_stick_counts(const std::vector<double>& p, const std::vector<double>& q,
                           double e_eps);

}  // namespace delaudit

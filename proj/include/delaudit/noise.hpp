#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "delaudit/pmf.hpp"
#include "delaudit/tape.hpp"

namespace delaudit {

// Two-sided geometric noise (pmf proportional to e^{-eps*|z|}) truncated to
// [-B, B] and realized by inverse-CDF on a w-bit uniform: atom z owns an
// integer count of w-bit draws, so every audit can enumerate the draw space
// exactly. Counts are built so that neighboring shifts respect the e^eps
// ratio away from the truncation boundary, and every atom owns at least one
// draw (the all-zeros draw maps to -B).
class TruncatedGeometricNoise {
 public:
  TruncatedGeometricNoise(double eps, int bound, int draw_width_bits);

  double eps() const { return eps_; }
  int bound() const { return bound_; }
  int draw_width() const { return w_; }

  // Consumes exactly draw_width() tape bits regardless of outcome.
  int64_t sample(RandomTape& tape) const;

  int64_t value_of_draw(uint64_t u) const;
  uint64_t count_of(int64_t z) const;
  // Draws mapping to z form the contiguous range [fiber_begin, fiber_begin+count).
  uint64_t fiber_begin(int64_t z) const;

  // Total variation between the realized pmf and the untruncated discrete
  // Laplace at the same eps: the delta surcharge audits must account for.
  double tail_deficit() const;

  // Realized distribution, atoms keyed by enc::i64(z). Masses are exact
  // dyadic rationals summing to 1.
  FinitePmf pmf() const;
  // Realized distribution shifted by `center`.
  FinitePmf pmf_at(int64_t center) const;

 private:
  double eps_;
  int bound_;
  int w_;
  std::vector<uint64_t> counts_;  // index z + bound_, sums to 2^w
  std::vector<uint64_t> cum_;     // exclusive prefix sums, cum_[2B+1] = 2^w
};

using NoisePtr = std::shared_ptr<const TruncatedGeometricNoise>;

}  // namespace delaudit

#include "delaudit/noise.hpp"

#include <cmath>

#include "delaudit/errors.hpp"

namespace delaudit {

namespace {

// Tail counts n_1..n_B from a provisional center count: n_{k+1} = ceil(n_k q)
// with q = e^{-eps}. The ceil keeps the step ratio >= q, which is what makes
// neighboring-shift hockey-stick vanish away from the boundary.
std::vector<uint64_t> tail_counts(uint64_t center, int bound, long double q) {
  std::vector<uint64_t> n(bound + 1);
  n[0] = center;
  for (int k = 1; k <= bound; ++k) {
    long double x = static_cast<long double>(n[k - 1]) * q;
    uint64_t c = static_cast<uint64_t>(ceill(x));
    if (c < 1) c = 1;
    if (c > n[k - 1]) c = n[k - 1];
    n[k] = c;
  }
  return n;
}

}  // namespace

TruncatedGeometricNoise::TruncatedGeometricNoise(double eps, int bound, int draw_width_bits)
    : eps_(eps), bound_(bound), w_(draw_width_bits) {
  if (eps <= 0) throw ParameterError("noise eps must be positive");
  if (bound < 1 || draw_width_bits < 1 || draw_width_bits > 40) {
    throw ParameterError("noise bound/draw width out of range");
  }
  const uint64_t total = uint64_t(1) << w_;
  if (total < uint64_t(2 * bound + 1)) {
    throw ParameterError("draw width too small for support");
  }
  const long double q = expl(-static_cast<long double>(eps));
  const long double e_eps = expl(static_cast<long double>(eps));

  auto tail_sum = [&](const std::vector<uint64_t>& t) {
    uint64_t s = 0;
    for (int k = 1; k <= bound_; ++k) s += t[k];
    return s;
  };

  // Smallest provisional center whose implied total reaches 2^w: leaves the
  // realized center at 2^w - 2*sum(tail), which tracks the true renormalized
  // center mass to within ~2B quantization units.
  uint64_t lo = 1, hi = total;
  while (lo < hi) {
    uint64_t s = lo + (hi - lo) / 2;
    auto t = tail_counts(s, bound_, q);
    if (s + 2 * tail_sum(t) < total) {
      lo = s + 1;
    } else {
      hi = s;
    }
  }

  uint64_t s = lo;
  std::vector<uint64_t> tail;
  uint64_t n0 = 0;
  bool found = false;
  // The remainder must sit within a factor e^eps of n_1 in both directions
  // for the neighboring ratios to hold at the center; nudge the seed if
  // rounding pushed it out.
  for (int adjust = 0; adjust < 4 * w_ + 8 && s >= 1 && s <= total; ++adjust) {
    tail = tail_counts(s, bound_, q);
    uint64_t st = tail_sum(tail);
    if (2 * st >= total) {
      --s;
      continue;
    }
    n0 = total - 2 * st;
    if (static_cast<long double>(n0) * e_eps < static_cast<long double>(tail[1])) {
      --s;
    } else if (static_cast<long double>(n0) > e_eps * static_cast<long double>(tail[1])) {
      ++s;
    } else {
      found = true;
      break;
    }
  }
  if (!found) throw ParameterError("no consistent noise quantization for these parameters");

  counts_.assign(2 * bound_ + 1, 0);
  for (int z = -bound_; z <= bound_; ++z) {
    counts_[z + bound_] = z == 0 ? n0 : tail[std::abs(z)];
  }
  cum_.assign(2 * bound_ + 2, 0);
  for (int i = 0; i <= 2 * bound_; ++i) cum_[i + 1] = cum_[i] + counts_[i];
}

int64_t TruncatedGeometricNoise::sample(RandomTape& tape) const {
  uint64_t u = tape.next_bits(w_);
  return value_of_draw(u);
}

int64_t TruncatedGeometricNoise::value_of_draw(uint64_t u) const {
  // First index with cum_[i+1] > u.
  int lo = 0, hi = 2 * bound_;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (cum_[mid + 1] > u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo - bound_;
}

uint64_t TruncatedGeometricNoise::count_of(int64_t z) const {
  if (z < -bound_ || z > bound_) return 0;
  return counts_[z + bound_];
}

uint64_t TruncatedGeometricNoise::fiber_begin(int64_t z) const {
  return cum_[z + bound_];
}

double TruncatedGeometricNoise::tail_deficit() const {
  const long double q = expl(-static_cast<long double>(eps_));
  const long double norm = (1 - q) / (1 + q);
  const long double total = static_cast<long double>(uint64_t(1) << w_);
  long double tv = 0;
  for (int z = -bound_; z <= bound_; ++z) {
    long double p = norm * powl(q, std::abs(z));
    long double realized = static_cast<long double>(counts_[z + bound_]) / total;
    tv += fabsl(realized - p);
  }
  // Untruncated mass beyond the bound: 2 * norm * q^{B+1} / (1-q).
  tv += 2 * norm * powl(q, bound_ + 1) / (1 - q);
  return static_cast<double>(tv / 2);
}

FinitePmf TruncatedGeometricNoise::pmf() const { return pmf_at(0); }

FinitePmf TruncatedGeometricNoise::pmf_at(int64_t center) const {
  std::vector<std::pair<Bytes, Rat>> atoms;
  const uint64_t total = uint64_t(1) << w_;
  for (int z = -bound_; z <= bound_; ++z) {
    atoms.emplace_back(enc::i64(center + z), Rat::from_ratio(counts_[z + bound_], total));
  }
  return FinitePmf::from_atoms(std::move(atoms));
}

}  // namespace delaudit

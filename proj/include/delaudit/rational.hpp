#pragma once

#include <cstdint>
#include <string>

#include "delaudit/errors.hpp"

namespace delaudit {

// Exact rational on __int128 with eager gcd normalization. Probability masses
// in this project are ratios of modest integers (tape-fiber counts over
// power-of-two denominators, empirical counts over trial counts), so 128 bits
// is ample; any overflow throws instead of silently wrapping.
class Rat {
 public:
  using I = __int128;

  Rat() : num_(0), den_(1) {}
  Rat(int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(I num, I den);

  static Rat from_ratio(uint64_t num, uint64_t den) { return Rat(I(num), I(den)); }
  // Exact value of the double (doubles are dyadic rationals).
  static Rat from_double_exact(double v);
  // Rational lower bound of x with relative error below 2^-49; used for
  // e^eps so a reported divergence can only over-estimate, never certify
  // falsely.
  static Rat lower_bound_of(long double x);

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const;
  std::string to_string() const;  // "num/den"

  I num() const { return num_; }
  I den() const { return den_; }

 private:
  void normalize();
  I num_;
  I den_;  // > 0 always
};

inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace delaudit

#include "delaudit/rational.hpp"

#include <cmath>
#include <cstring>

namespace delaudit {

namespace {

using I = Rat::I;
using U = unsigned __int128;

U u_abs(I x) { return x < 0 ? U(-(x + 1)) + 1 : U(x); }

U u_gcd(U a, U b) {
  while (b != 0) {
    U t = a % b;
    a = b;
    b = t;
  }
  return a;
}

I checked_mul(I a, I b) {
  I out;
  if (__builtin_mul_overflow(a, b, &out)) throw ArithmeticOverflowError("rational multiply overflow");
  return out;
}

I checked_add(I a, I b) {
  I out;
  if (__builtin_add_overflow(a, b, &out)) throw ArithmeticOverflowError("rational add overflow");
  return out;
}

std::string u_to_string(U v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + int(v % 10)));
    v /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

}  // namespace

Rat::Rat(I num, I den) : num_(num), den_(den) {
  if (den_ == 0) throw ArithmeticOverflowError("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  normalize();
}

void Rat::normalize() {
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  U g = u_gcd(u_abs(num_), U(den_));
  if (g > 1) {
    num_ /= I(g);
    den_ /= I(g);
  }
}

Rat Rat::from_double_exact(double v) {
  if (!std::isfinite(v)) throw ParameterError("non-finite value");
  if (v == 0.0) return Rat();
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
  I mant = I(std::llround(std::ldexp(m, 53)));
  int e = exp - 53;
  Rat r(mant, 1);
  while (e > 0) {
    r = r * Rat(2);
    --e;
  }
  while (e < 0) {
    r = r / Rat(2);
    ++e;
  }
  return r;
}

Rat Rat::lower_bound_of(long double x) {
  if (x <= 0) throw ParameterError("lower_bound_of requires positive input");
  int exp = 0;
  long double m = frexpl(x, &exp);
  // Truncate to a 50-bit mantissa: a value <= x, short at most 2^-49
  // relative. Keeping the denominator modest leaves headroom for the exact
  // sums the hockey-stick computation does on top.
  I mant = I(ldexpl(m, 50));
  int e = exp - 50;
  if (e >= 0) {
    I num = mant;
    for (int i = 0; i < e; ++i) num = checked_mul(num, 2);
    return Rat(num, 1);
  }
  I den = 1;
  for (int i = 0; i < -e; ++i) den = checked_mul(den, 2);
  return Rat(mant, den);
}

Rat Rat::operator+(const Rat& o) const {
  // Cross-multiply over the gcd to keep intermediates small.
  U g = u_gcd(U(den_), U(o.den_));
  I db = den_ / I(g);
  I do_ = o.den_ / I(g);
  I num = checked_add(checked_mul(num_, do_), checked_mul(o.num_, db));
  I den = checked_mul(db, o.den_);
  return Rat(num, den);
}

Rat Rat::operator-(const Rat& o) const { return *this + Rat(-o.num_, o.den_); }

Rat Rat::operator*(const Rat& o) const {
  U g1 = u_gcd(u_abs(num_), U(o.den_));
  U g2 = u_gcd(u_abs(o.num_), U(den_));
  I n1 = num_ / I(g1);
  I d2 = o.den_ / I(g1);
  I n2 = o.num_ / I(g2);
  I d1 = den_ / I(g2);
  return Rat(checked_mul(n1, n2), checked_mul(d1, d2));
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw ArithmeticOverflowError("rational divide by zero");
  return *this * Rat(o.den_, o.num_);
}

// Continued-fraction comparison: no multiplications, immune to overflow.
bool Rat::operator<(const Rat& o) const {
  I a = num_, b = den_, c = o.num_, d = o.den_;
  while (true) {
    I qa = a / b, ra = a % b;
    if (ra < 0) {
      qa -= 1;
      ra += b;
    }
    I qc = c / d, rc = c % d;
    if (rc < 0) {
      qc -= 1;
      rc += d;
    }
    if (qa != qc) return qa < qc;
    if (ra == 0 || rc == 0) return rc != 0;
    // ra/b < rc/d  <=>  d/rc < b/ra; recurse on the reciprocals.
    I na = d, nb = rc, nc = b, nd = ra;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
}

double Rat::to_double() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rat::to_string() const {
  std::string s;
  if (num_ < 0) s = "-";
  s += u_to_string(u_abs(num_));
  if (den_ != 1) {
    s += "/";
    s += u_to_string(U(den_));
  }
  return s;
}

}  // namespace delaudit

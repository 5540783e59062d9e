#pragma once

// Double-double arithmetic: an unevaluated sum hi + lo of two IEEE doubles
// with |lo| <= ulp(hi)/2, giving ~31 decimal digits.  The usual error-free
// transformations (Knuth two_sum, FMA-based two_prod) are used throughout;
// they require that the compiler neither fuses nor reassociates float ops,
// which the build enforces with -ffp-contract=off.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>

namespace ribamp {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}
  explicit constexpr DoubleDouble(int v) : hi(v), lo(0.0) {}
  explicit constexpr DoubleDouble(long long v)
      : hi(static_cast<double>(v)),
        lo(static_cast<double>(v - static_cast<long long>(static_cast<double>(v)))) {}
};

namespace ddops {

// s = fl(a+b), err exact: a+b = s+err.  No magnitude precondition.
inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

// requires |a| >= |b| (or a == 0)
inline double quick_two_sum(double a, double b, double& err) {
  double s = a + b;
  err = b - (s - a);
  return s;
}

// p = fl(a*b), err exact via FMA: a*b = p+err.
inline double two_prod(double a, double b, double& err) {
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

}  // namespace ddops

inline DoubleDouble dd_normalize(double hi, double lo) {
  double e;
  double s = ddops::quick_two_sum(hi, lo, e);
  return {s, e};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  double e1, e2;
  double s = ddops::two_sum(a.hi, b.hi, e1);
  double t = ddops::two_sum(a.lo, b.lo, e2);
  e1 += t;
  s = ddops::quick_two_sum(s, e1, e1);
  e1 += e2;
  return dd_normalize(s, e1);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  double e;
  double p = ddops::two_prod(a.hi, b.hi, e);
  e += a.hi * b.lo + a.lo * b.hi;
  return dd_normalize(p, e);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  // one Newton refinement of the double quotient, then a residual correction
  double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  double q3 = r.hi / b.hi;
  DoubleDouble q = dd_normalize(q1, q2);
  return q + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, DoubleDouble b) { return a = a / b; }

inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DoubleDouble a, DoubleDouble b) { return !(a == b); }
inline bool operator<(DoubleDouble a, DoubleDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
inline bool operator<=(DoubleDouble a, DoubleDouble b) { return !(b < a); }
inline bool operator>=(DoubleDouble a, DoubleDouble b) { return !(a < b); }

inline double to_double(DoubleDouble a) { return a.hi + a.lo; }
inline bool is_zero(DoubleDouble a) { return a.hi == 0.0 && a.lo == 0.0; }

inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

DoubleDouble sqrt(DoubleDouble a);
DoubleDouble exp(DoubleDouble a);
DoubleDouble log(DoubleDouble a);

// integer power by binary exponentiation (n may be negative)
DoubleDouble powi(DoubleDouble a, long long n);
// general real power of a positive base: exp(b*log(a))
DoubleDouble pow(DoubleDouble a, DoubleDouble b);

std::string to_string(DoubleDouble a);
std::ostream& operator<<(std::ostream& os, DoubleDouble a);

}  // namespace ribamp

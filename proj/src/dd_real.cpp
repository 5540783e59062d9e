#include "ribamp/dd_real.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "ribamp/errors.hpp"

namespace ribamp {

DoubleDouble sqrt(DoubleDouble a) {
  if (is_zero(a)) return {};
  if (a.hi < 0.0) throw MathError("SingularPoint", "sqrt of negative double-double");
  // Karp/Markstein: x ~ 1/sqrt(a) in double, one correction in dd
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  DoubleDouble axdd(ax);
  DoubleDouble diff = a - axdd * axdd;
  return axdd + DoubleDouble(diff.hi * (x * 0.5));
}

DoubleDouble exp(DoubleDouble a) {
  // reduce: a = k*ln2 + r with |r| <= ln2/2, then Taylor on r/512, square back
  static const DoubleDouble kLn2(6.931471805599452862e-01, 2.319046813846299558e-17);
  if (a.hi > 709.0) throw MathError("Overflow", "exp overflow in double-double");
  if (a.hi < -709.0) return {};
  double k = std::floor(a.hi / kLn2.hi + 0.5);
  DoubleDouble r = a - kLn2 * DoubleDouble(k);
  const double kScale = 1.0 / 512.0;  // 2^-9
  r = r * DoubleDouble(kScale);
  // Taylor sum of exp(r)-1; |r| <= ln2/1024 so ~11 terms reach 1e-33
  DoubleDouble term = r;
  DoubleDouble sum = r;
  for (int i = 2; i <= 14; ++i) {
    term = term * r / DoubleDouble(static_cast<double>(i));
    sum += term;
    if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  // undo scaling: (1+s)^(2^9) via repeated squaring of (1+s)
  for (int i = 0; i < 9; ++i) sum = sum * sum + sum + sum;  // (1+s)^2 - 1
  DoubleDouble result = sum + DoubleDouble(1.0);
  return result * powi(DoubleDouble(2.0), static_cast<long long>(k));
}

DoubleDouble log(DoubleDouble a) {
  if (a.hi <= 0.0) throw MathError("SingularPoint", "log of non-positive double-double");
  // Newton on exp: y' = y + a*exp(-y) - 1, starting from the double log
  DoubleDouble y(std::log(a.hi));
  for (int i = 0; i < 2; ++i) y = y + a * exp(-y) - DoubleDouble(1.0);
  return y;
}

DoubleDouble powi(DoubleDouble a, long long n) {
  if (n == 0) return DoubleDouble(1.0);
  bool neg = n < 0;
  unsigned long long m = neg ? static_cast<unsigned long long>(-(n + 1)) + 1ULL
                             : static_cast<unsigned long long>(n);
  DoubleDouble base = a, acc(1.0);
  while (m) {
    if (m & 1ULL) acc *= base;
    base *= base;
    m >>= 1;
  }
  return neg ? DoubleDouble(1.0) / acc : acc;
}

DoubleDouble pow(DoubleDouble a, DoubleDouble b) {
  if (is_zero(b)) return DoubleDouble(1.0);
  if (is_zero(a)) return {};
  double bi = std::round(b.hi);
  if (b.lo == 0.0 && b.hi == bi && std::abs(bi) < 1e15)
    return powi(a, static_cast<long long>(bi));
  if (a.hi < 0.0) throw MathError("SingularPoint", "pow of negative base with non-integer exponent");
  return exp(b * log(a));
}

std::string to_string(DoubleDouble a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17g", a.hi, a.lo);
  return buf;
}

std::ostream& operator<<(std::ostream& os, DoubleDouble a) { return os << to_string(a); }

}  // namespace ribamp

#pragma once

// Scalar backends shared by the divided-difference and amplitude code:
//   double        - fast path
//   DoubleDouble  - default for amplitude work (~31 digits)
//   Rational      - exact arithmetic (boost::multiprecision), used by the
//                   oracles for families whose derivatives are rational
// scalar_ops<S> centralizes the few operations generic code needs.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "ribamp/dd_real.hpp"

namespace ribamp {

using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct scalar_ops;

template <>
struct scalar_ops<double> {
  static double from_int(long long v) { return static_cast<double>(v); }
  static double from_double(double v) { return v; }
  static double abs(double v) { return std::abs(v); }
  static bool is_zero(double v) { return v == 0.0; }
  static double to_double(double v) { return v; }
  static constexpr bool exact = false;
  static constexpr double default_eta = 1e-6;
};

template <>
struct scalar_ops<DoubleDouble> {
  static DoubleDouble from_int(long long v) { return DoubleDouble(v); }
  static DoubleDouble from_double(double v) { return DoubleDouble(v); }
  static DoubleDouble abs(DoubleDouble v) { return ribamp::abs(v); }
  static bool is_zero(DoubleDouble v) { return ribamp::is_zero(v); }
  static double to_double(DoubleDouble v) { return ribamp::to_double(v); }
  static constexpr bool exact = false;
  static constexpr double default_eta = 1e-12;
};

template <>
struct scalar_ops<Rational> {
  static Rational from_int(long long v) { return Rational(v); }
  static Rational from_double(double v);
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static bool is_zero(const Rational& v) { return v == 0; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static constexpr bool exact = true;
  static constexpr double default_eta = 0.0;  // exact equality only
};

inline Rational scalar_ops<Rational>::from_double(double v) {
  // every finite double is a dyadic rational
  int exp2 = 0;
  double m = std::frexp(v, &exp2);
  long long mant = static_cast<long long>(std::ldexp(m, 53));
  exp2 -= 53;
  Rational r(mant);
  if (exp2 >= 0)
    r *= Rational(boost::multiprecision::cpp_int(1) << exp2);
  else
    r /= Rational(boost::multiprecision::cpp_int(1) << (-exp2));
  return r;
}

enum class Backend { Float64, DoubleDoubleBackend, ExactRational };

}  // namespace ribamp

#pragma once

// Truncated spectra and the smooth function families whose divided
// differences drive every amplitude.  Derivatives of all families come from
// closed-form recurrences evaluated in the caller's scalar type -- never
// from numerical differentiation -- so the confluent tables stay accurate
// in every backend.

#include <string>
#include <vector>

#include "ribamp/errors.hpp"
#include "ribamp/scalar.hpp"

namespace ribamp {

// ---------------------------------------------------------------------------
// spectra

enum class SpectrumModel { Power, SignedPower };

// Eigenvalue ladders lambda_k for k = 1..N:
//   Power:        lambda_k = c * k^(1/d) + epsilon
//   SignedPower:  lambda_k = (-1)^k * c * ceil(k/2)^(1/d) + epsilon
// With singular_mode on, the distinguished index `singular_index`
// (conventionally 0) is admitted with lambda = 0 exactly; it never appears
// as a running index, only as a fixed external assignment.
struct Spectrum {
  SpectrumModel model = SpectrumModel::Power;
  double d = 1.0;
  double c = 1.0;
  double epsilon = 0.0;
  bool singular_mode = false;
  int singular_index = 0;

  double eigenvalue(int k) const;

  template <class S>
  S eigenvalue_as(int k) const;

  bool is_singular_index(int k) const { return singular_mode && k == singular_index; }
};

// ---------------------------------------------------------------------------
// function families

enum class FamilyKind { InversePower, RegularizedPower, Polynomial };

// f and its derivatives to arbitrary order:
//   InversePower(p):      f(x) = x^-p              (p even positive integer)
//   RegularizedPower(p):  f(x) = (1+x^2)^(-p/2)    (p > 0 real)
//   Polynomial(coeffs):   f(x) = sum_j coeffs[j] x^j
// An optional shift turns f into x -> f(x - shift); it composes with any
// family and implements the translated function used by the invariance
// checks.  `derivative_budget` caps the derivative order a confluent table
// may request (MathError OrderTooHigh beyond it).
class SmoothFamily {
public:
  static SmoothFamily inverse_power(int p);
  static SmoothFamily regularized_power(double p);
  static SmoothFamily polynomial(std::vector<double> coeffs);

  SmoothFamily shifted(double eps) const;

  FamilyKind kind() const { return kind_; }
  double p() const { return p_; }
  double shift() const { return shift_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int derivative_budget() const { return budget_; }
  void set_derivative_budget(int b) { budget_ = b; }

  // true if f(-x) == f(x) (shift 0); power counting assumes it
  bool is_even() const;

  // k-th derivative of f at x (k = 0 evaluates f itself)
  template <class S>
  S derivative(int k, S x) const;

  std::string describe() const;

private:
  FamilyKind kind_ = FamilyKind::InversePower;
  double p_ = 2.0;
  double shift_ = 0.0;
  std::vector<double> coeffs_;
  int budget_ = 48;
};

// ---------------------------------------------------------------------------
// precise-order probe

// Empirical check that |f^(k)(x)| ~ |x|^(-p-k): samples log-spaced |x| over
// [range_lo, range_hi] (both signs) and reports min/max of
// |f^(k)(x)| * |x|^(p+k) for each k <= k_max.  A family of precise order -p
// keeps every band inside fixed positive constants; polynomials blow up.
struct OrderProbeBand {
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct OrderProbeReport {
  std::vector<OrderProbeBand> bands;
  bool bounded = false;  // all bands within [1/bound_factor, bound_factor]*center
};

OrderProbeReport precise_order_probe(const SmoothFamily& f, double p, int k_max,
                                     double range_lo, double range_hi,
                                     int samples_per_decade = 8);

// ---------------------------------------------------------------------------
// implementation of the templated members

template <class S>
S Spectrum::eigenvalue_as(int k) const {
  if (singular_mode && k == singular_index) return S{};
  if (k < 1)
    throw MathError("IndexZeroWithoutSingularMode",
                    "spectrum index " + std::to_string(k) +
                        " requires the singular mode (indices start at 1)");
  long long base = k;
  double sign = 1.0;
  if (model == SpectrumModel::SignedPower) {
    base = (k + 1) / 2;  // ceil(k/2)
    sign = (k % 2 == 0) ? 1.0 : -1.0;
  }
  S root;
  if constexpr (scalar_ops<S>::exact) {
    if (d != 1.0)
      throw MathError("ExactBackendUnsupported",
                      "exact spectrum requires d == 1");
    root = scalar_ops<S>::from_int(base);
  } else if constexpr (std::is_same_v<S, DoubleDouble>) {
    if (d == 1.0)
      root = DoubleDouble(static_cast<double>(base));
    else if (d == 2.0)
      root = sqrt(DoubleDouble(static_cast<double>(base)));
    else
      root = exp(log(DoubleDouble(static_cast<double>(base))) / DoubleDouble(d));
  } else {
    root = std::pow(static_cast<double>(base), 1.0 / d);
  }
  return scalar_ops<S>::from_double(sign * c) * root + scalar_ops<S>::from_double(epsilon);
}

template <class S>
S SmoothFamily::derivative(int k, S x) const {
  if (k < 0) throw MathError("OrderTooHigh", "negative derivative order");
  if (k > budget_)
    throw MathError("OrderTooHigh", "derivative order " + std::to_string(k) +
                                        " exceeds budget " + std::to_string(budget_));
  if (shift_ != 0.0) x = x - scalar_ops<S>::from_double(shift_);

  switch (kind_) {
    case FamilyKind::InversePower: {
      // f = x^-p:  f^(k)(x) = (-1)^k p (p+1) ... (p+k-1) x^(-p-k)
      if (scalar_ops<S>::is_zero(x))
        throw MathError("SingularPoint", "inverse power family evaluated at 0");
      long long ip = static_cast<long long>(p_);
      S coeff = scalar_ops<S>::from_int((k % 2 == 0) ? 1 : -1);
      for (long long j = 0; j < k; ++j) coeff = coeff * scalar_ops<S>::from_int(ip + j);
      S xpow = scalar_ops<S>::from_int(1);
      for (long long j = 0; j < ip + k; ++j) xpow = xpow * x;
      return coeff / xpow;
    }
    case FamilyKind::RegularizedPower: {
      if constexpr (scalar_ops<S>::exact)
        throw MathError("ExactBackendUnsupported",
                        "regularized family has irrational derivatives");
      else {
        // (1+x^2) f' + p x f = 0 differentiated j times gives
        // f^(j+1) = -[(2j+p) x f^(j) + j(j-1+p) f^(j-1)] / (1+x^2)
        S one = scalar_ops<S>::from_int(1);
        S u = one + x * x;
        S f0;
        double ph = p_ * 0.5;
        long long iph = static_cast<long long>(ph);
        if (ph == static_cast<double>(iph)) {
          S upow = one;
          for (long long j = 0; j < iph; ++j) upow = upow * u;
          f0 = one / upow;
        } else if constexpr (std::is_same_v<S, DoubleDouble>) {
          f0 = pow(u, DoubleDouble(-ph));
        } else {
          f0 = std::pow(u, -ph);
        }
        if (k == 0) return f0;
        S fjm1 = scalar_ops<S>::from_int(0);
        S fj = f0;
        for (int j = 0; j < k; ++j) {
          S a = scalar_ops<S>::from_double(2.0 * j + p_);
          S b = scalar_ops<S>::from_double(static_cast<double>(j) * (j - 1.0 + p_));
          S fnext = -(a * x * fj + b * fjm1) / u;
          fjm1 = fj;
          fj = fnext;
        }
        return fj;
      }
    }
    case FamilyKind::Polynomial: {
      // Horner on the k-th derivative's coefficients
      int deg = static_cast<int>(coeffs_.size()) - 1;
      if (k > deg) return S{};
      S acc{};
      for (int j = deg; j >= k; --j) {
        double fall = 1.0;
        for (int m = 0; m < k; ++m) fall *= static_cast<double>(j - m);
        acc = acc * x + scalar_ops<S>::from_double(coeffs_[j] * fall);
      }
      return acc;
    }
  }
  throw MathError("InternalAssertion", "unknown family kind");
}

}  // namespace ribamp

#include "ribamp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ribamp {

double Spectrum::eigenvalue(int k) const { return eigenvalue_as<double>(k); }

SmoothFamily SmoothFamily::inverse_power(int p) {
  if (p <= 0 || p % 2 != 0)
    throw MathError("InvalidFamily", "inverse power exponent must be an even positive integer");
  SmoothFamily f;
  f.kind_ = FamilyKind::InversePower;
  f.p_ = static_cast<double>(p);
  return f;
}

SmoothFamily SmoothFamily::regularized_power(double p) {
  if (!(p > 0.0))
    throw MathError("InvalidFamily", "regularized power exponent must be positive");
  SmoothFamily f;
  f.kind_ = FamilyKind::RegularizedPower;
  f.p_ = p;
  return f;
}

SmoothFamily SmoothFamily::polynomial(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  SmoothFamily f;
  f.kind_ = FamilyKind::Polynomial;
  f.p_ = 0.0;
  f.coeffs_ = std::move(coeffs);
  return f;
}

SmoothFamily SmoothFamily::shifted(double eps) const {
  SmoothFamily f = *this;
  f.shift_ += eps;
  return f;
}

bool SmoothFamily::is_even() const {
  if (shift_ != 0.0) return false;
  switch (kind_) {
    case FamilyKind::InversePower:
      return true;  // exponent enforced even at construction
    case FamilyKind::RegularizedPower:
      return true;
    case FamilyKind::Polynomial:
      for (std::size_t j = 1; j < coeffs_.size(); j += 2)
        if (coeffs_[j] != 0.0) return false;
      return true;
  }
  return false;
}

std::string SmoothFamily::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case FamilyKind::InversePower:
      os << "x^-" << static_cast<long long>(p_);
      break;
    case FamilyKind::RegularizedPower:
      os << "(1+x^2)^(-" << p_ / 2.0 << ")";
      break;
    case FamilyKind::Polynomial: {
      os << "poly[";
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (j) os << ",";
        os << coeffs_[j];
      }
      os << "]";
      break;
    }
  }
  if (shift_ != 0.0) os << " shifted by " << shift_;
  return os.str();
}

OrderProbeReport precise_order_probe(const SmoothFamily& f, double p, int k_max,
                                     double range_lo, double range_hi,
                                     int samples_per_decade) {
  if (!(range_lo > 0.0) || !(range_hi > range_lo))
    throw MathError("InvalidRange", "probe range must satisfy 0 < lo < hi");
  OrderProbeReport rep;
  const double decades = std::log10(range_hi / range_lo);
  const int n = std::max(2, static_cast<int>(decades * samples_per_decade) + 1);
  for (int k = 0; k <= k_max; ++k) {
    OrderProbeBand band;
    band.k = k;
    band.lo = std::numeric_limits<double>::infinity();
    band.hi = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = range_lo * std::pow(range_hi / range_lo, static_cast<double>(i) / (n - 1));
      for (double s : {x, -x}) {
        double v = std::abs(f.derivative<double>(k, s)) * std::pow(std::abs(s), p + k);
        band.lo = std::min(band.lo, v);
        band.hi = std::max(band.hi, v);
      }
    }
    rep.bands.push_back(band);
  }
  // bounded: every band is either identically zero or pinned inside a fixed
  // dynamic range; families of the wrong order drift without limit instead
  rep.bounded = true;
  for (const auto& b : rep.bands) {
    if (b.hi == 0.0) continue;
    if (!(b.hi < std::numeric_limits<double>::infinity()) || b.lo <= 0.0 ||
        b.hi / b.lo > 1e6)
      rep.bounded = false;
  }
  return rep;
}

}  // namespace ribamp

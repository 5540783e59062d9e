#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "ribamp/dd_real.hpp"

using ribamp::DoubleDouble;

TEST_CASE("error-free transformations recover dropped bits") {
  double err = 0.0;
  double s = ribamp::ddops::two_sum(1e16, 1.0, err);
  CHECK(s == 1e16);
  CHECK(err == 1.0);

  // (2^27+1)^2 = 2^54 + 2^28 + 1 needs 55 bits; the +1 lands in the error term
  double p = ribamp::ddops::two_prod(134217729.0, 134217729.0, err);
  CHECK(p == 18014398777917440.0);
  CHECK(err == 1.0);
}

TEST_CASE("addition keeps cancelled low-order parts") {
  DoubleDouble a(1e16);
  DoubleDouble sum = a + DoubleDouble(1.0) - a;
  CHECK(ribamp::to_double(sum) == 1.0);

  DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
  DoubleDouble back = third * DoubleDouble(3.0) - DoubleDouble(1.0);
  CHECK(std::abs(ribamp::to_double(back)) < 1e-30);
}

TEST_CASE("multiplication is exact on exactly representable products") {
  DoubleDouble x(134217729.0);
  DoubleDouble sq = x * x;
  CHECK(sq.hi == 18014398777917440.0);
  CHECK(sq.lo == 1.0);
}

TEST_CASE("random arithmetic stays normalized and consistent") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> mag(-1e6, 1e6);
  for (int t = 0; t < 2000; ++t) {
    DoubleDouble a(mag(rng), mag(rng) * 1e-18);
    DoubleDouble b(mag(rng), mag(rng) * 1e-18);
    if (ribamp::is_zero(b)) continue;
    DoubleDouble q = a / b;
    DoubleDouble r = q * b - a;
    // |q*b - a| <= ~ulp^2 * |a|
    CHECK(std::abs(ribamp::to_double(r)) <=
          1e-28 * std::max(1.0, std::abs(ribamp::to_double(a))));
    DoubleDouble s = a + b;
    CHECK(std::abs(s.lo) <= std::ldexp(std::max(1.0, std::abs(s.hi)), -52));
  }
}

TEST_CASE("square root and exponential round trips") {
  DoubleDouble r = ribamp::sqrt(DoubleDouble(2.0));
  CHECK(std::abs(ribamp::to_double(r * r - DoubleDouble(2.0))) < 1e-30);
  CHECK(ribamp::to_double(ribamp::sqrt(DoubleDouble(4.0))) == 2.0);

  DoubleDouble e = ribamp::exp(ribamp::log(DoubleDouble(5.0)));
  CHECK(std::abs(ribamp::to_double(e - DoubleDouble(5.0))) < 1e-28);
  CHECK(ribamp::to_double(ribamp::exp(DoubleDouble(0.0))) == 1.0);
  CHECK(ribamp::to_double(ribamp::log(DoubleDouble(1.0))) == 0.0);

  DoubleDouble l = ribamp::log(ribamp::exp(DoubleDouble(2.0)));
  CHECK(std::abs(ribamp::to_double(l - DoubleDouble(2.0))) < 1e-29);
}

TEST_CASE("integer and real powers") {
  CHECK(ribamp::to_double(ribamp::powi(DoubleDouble(3.0), 5)) == 243.0);
  CHECK(ribamp::to_double(ribamp::powi(DoubleDouble(2.0), -3)) == 0.125);
  DoubleDouble p = ribamp::pow(DoubleDouble(2.0), DoubleDouble(0.5));
  CHECK(std::abs(ribamp::to_double(p - ribamp::sqrt(DoubleDouble(2.0)))) < 1e-30);
}

TEST_CASE("ordering, absolute value, formatting") {
  CHECK(DoubleDouble(1.0, 1e-20) > DoubleDouble(1.0));
  CHECK(DoubleDouble(1.0) < DoubleDouble(1.0, 1e-20));
  CHECK(DoubleDouble(-2.0) < DoubleDouble(1.0));
  CHECK(ribamp::abs(DoubleDouble(-3.5)) == DoubleDouble(3.5));
  CHECK(ribamp::abs(DoubleDouble(0.0, -1e-20)) == DoubleDouble(0.0, 1e-20));

  // component format: hi printed to 17 digits, then the signed lo part
  std::string s = ribamp::to_string(DoubleDouble(1.0) / DoubleDouble(3.0));
  CHECK(s.substr(0, 10) == "0.33333333");
  CHECK(s.find_first_of("+-", 1) != std::string::npos);
}

#include "ribamp/divdiff.hpp"

#include <cmath>
#include <map>

namespace ribamp {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int q) {
  if (q < 1 || q > 512) throw MathError("InvalidQuadrature", "point count out of range");
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard lk(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;

  std::vector<double> x(q), w(q);
  for (int i = 0; i < q; ++i) {
    // Chebyshev initial guess, then Newton on P_q
    double t = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int n = 2; n <= q; ++n) {
        double p2 = ((2.0 * n - 1.0) * t * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      double dp = q * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int n = 2; n <= q; ++n) {
      double p2 = ((2.0 * n - 1.0) * t * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    double dp = q * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(q, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

// normalized B-spline N_{0,deg} on knots z[0..deg+1], Cox-de Boor with 0/0 -> 0
double bspline_basis(const std::vector<double>& z, double t) {
  const int n = static_cast<int>(z.size()) - 1;  // number of degree-0 cells
  const int deg = n - 1;
  std::vector<double> N(n);
  for (int i = 0; i < n; ++i) N[i] = (z[i] <= t && t < z[i + 1]) ? 1.0 : 0.0;
  for (int k = 1; k <= deg; ++k) {
    for (int i = 0; i + k < n; ++i) {
      double a = 0.0, b = 0.0;
      if (z[i + k] > z[i]) a = (t - z[i]) / (z[i + k] - z[i]) * N[i];
      if (z[i + k + 1] > z[i + 1]) b = (z[i + k + 1] - t) / (z[i + k + 1] - z[i + 1]) * N[i + 1];
      N[i] = a + b;
    }
  }
  return N[0];
}

}  // namespace

double divdiff_integral(const SmoothFamily& f, int base_order, std::vector<double> nodes,
                        int quad_points) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < 0) throw MathError("EmptyNodeList", "divided difference needs at least one node");
  std::sort(nodes.begin(), nodes.end());
  if (n == 0) return f.derivative(base_order, nodes[0]);
  if (nodes.front() == nodes.back()) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return f.derivative(base_order + n, nodes[0]) / fact;
  }
  const auto& [gx, gw] = gauss_legendre(quad_points);
  const int q = quad_points;

  if (n <= 3) {
    // ordered-simplex mean value form, mapped to the unit cube via
    // t_i = u_1 u_2 ... u_i with Jacobian prod u_i^(n-i)
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) diff[i] = nodes[i + 1] - nodes[i];
    std::vector<int> ix(n, 0);
    double sum = 0.0;
    while (true) {
      double jac = 1.0, tprod = 1.0, arg = nodes[0], wght = 1.0;
      for (int i = 0; i < n; ++i) {
        double u = 0.5 * (gx[ix[i]] + 1.0);
        wght *= 0.5 * gw[ix[i]];
        tprod *= u;
        arg += tprod * diff[i];
        for (int r = 0; r < n - 1 - i; ++r) jac *= u;
      }
      sum += wght * jac * f.derivative(base_order + n, arg);
      int pos = n - 1;
      while (pos >= 0 && ++ix[pos] == q) ix[pos--] = 0;
      if (pos < 0) break;
    }
    return sum;
  }

  // B-spline kernel form: g[z_0..z_n] = (1/n!) Int M(t) g^(n)(t) dt with
  // M = n/(z_n - z_0) * N_{0,n-1}; integrate per distinct-knot panel
  double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= k;
  const double norm = n / ((nodes.back() - nodes.front()) * fact);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = nodes[i], b = nodes[i + 1];
    if (!(b > a)) continue;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double panel = 0.0;
    for (int j = 0; j < q; ++j) {
      double t = mid + half * gx[j];
      panel += gw[j] * bspline_basis(nodes, t) * f.derivative(base_order + n, t);
    }
    total += half * panel;
  }
  return norm * total;
}

Rational hp_oracle(int p, const std::vector<Rational>& xs) {
  if (p < 0) throw MathError("InvalidFamily", "homogeneous degree must be nonnegative");
  std::vector<Rational> h(static_cast<std::size_t>(p) + 1);
  h[0] = 1;
  for (const auto& x : xs) {
    if (x == 0) throw MathError("SingularPoint", "reciprocal of zero node");
    Rational y = Rational(1) / x;
    for (int j = 1; j <= p; ++j) h[j] += y * h[j - 1];
  }
  return h[p];
}

}  // namespace ribamp

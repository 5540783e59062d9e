#include "ribamp/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace ribamp {

namespace {

template <class S>
void run_sweep_backend(const SweepRequest& req, SweepSeries& out) {
  DivDiffEngine<S> engine(req.family, req.spectrum);

  auto eval_point = [&](SweepPoint& pt) {
    AmplitudeRequest areq;
    areq.graph = req.graph;
    areq.faces = req.faces;
    areq.assignment = req.assignment;
    areq.external_indices = req.external_indices;
    areq.N = pt.N;
    areq.summation = req.summation;
    areq.threads = req.threads;
    try {
      AmplitudeResult<S> r = evaluate(engine, areq);
      pt.value = scalar_ops<S>::to_double(r.value);
      pt.abs_amplitude = std::abs(pt.value);
      pt.wall_time = r.wall_time;
      pt.term_count = r.term_count;
      pt.ok = std::isfinite(pt.value);
      if (!pt.ok) pt.error = "amplitude is not finite";
    } catch (const Error& e) {
      pt.ok = false;
      pt.error = e.code() + ": " + e.what();
    }
  };

  if (req.parallel_points && out.points.size() > 1) {
    // big cutoffs dominate the cost, so hand them out first
    std::vector<std::size_t> order(out.points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.points[a].N > out.points[b].N; });
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t nworkers = std::min<std::size_t>(hw, order.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t w = 0; w < nworkers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= order.size()) return;
          eval_point(out.points[order[i]]);
        }
      });
    for (auto& t : pool) t.join();
  } else {
    for (SweepPoint& pt : out.points) eval_point(pt);
  }

  const MemoStats st = engine.stats();
  out.memo_hits = st.hits;
  out.memo_misses = st.misses;
}

double aitken_limit(const std::vector<double>& s) {
  const std::size_t m = s.size();
  if (m == 0) return 0.0;
  if (m == 1) return s[0];
  if (m == 2) return s[1];
  const double s0 = s[m - 3], s1 = s[m - 2], s2 = s[m - 1];
  const double d1 = s1 - s0, d2 = s2 - s1;
  const double denom = d2 - d1;
  double e = s2;
  if (std::abs(denom) > 1e-12 * (std::abs(d1) + std::abs(d2)))
    e = s2 - d2 * d2 / denom;
  // accelerated value is kept inside the span of the last three local slopes
  const double lo = std::min({s0, s1, s2});
  const double hi = std::max({s0, s1, s2});
  return std::clamp(e, lo, hi);
}

}  // namespace

SweepSeries sweep(const SweepRequest& req, const std::vector<int>& N_list) {
  if (!req.graph || !req.faces || !req.assignment)
    throw MathError("BadRange", "sweep request is missing graph data");
  if (N_list.empty()) throw MathError("BadRange", "empty cutoff list");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 1) throw MathError("BadRange", "cutoffs must be >= 1");
    if (i > 0 && N_list[i] <= N_list[i - 1])
      throw MathError("BadRange", "cutoff list must be strictly increasing");
  }

  const int U = static_cast<int>(req.faces->unbroken_labels().size());
  for (int N : N_list) {
    const double terms = std::pow(static_cast<double>(N), U);
    if (terms > 1e7)
      throw BudgetError("BudgetExceeded",
                        "N = " + std::to_string(N) + " needs " +
                            std::to_string(static_cast<std::uint64_t>(terms)) +
                            " terms; the sweep budget is 1e7");
  }

  SweepSeries out;
  out.descriptor = req.descriptor;
  out.points.resize(N_list.size());
  for (std::size_t i = 0; i < N_list.size(); ++i) out.points[i].N = N_list[i];

  switch (req.backend) {
    case Backend::Float64:
      run_sweep_backend<double>(req, out);
      break;
    case Backend::DoubleDoubleBackend:
      run_sweep_backend<DoubleDouble>(req, out);
      break;
    case Backend::ExactRational:
      run_sweep_backend<Rational>(req, out);
      break;
  }
  return out;
}

SlopeFit fit_slope(const SweepSeries& series, int window) {
  std::vector<double> xs, ys;  // (log N, log |A|) over usable points
  for (const SweepPoint& p : series.points) {
    if (!p.ok) continue;
    if (p.abs_amplitude <= 0.0)
      throw MathError("NonPositiveValue", "amplitude at N = " + std::to_string(p.N) +
                                              " is zero; log-log fit undefined");
    xs.push_back(std::log(static_cast<double>(p.N)));
    ys.push_back(std::log(p.abs_amplitude));
  }
  const int usable = static_cast<int>(xs.size());
  if (usable < 3)
    throw MathError("TooFewPoints", "log-log fit needs at least 3 positive points, have " +
                                        std::to_string(usable));
  if (window <= 0 || window > usable) window = usable;
  if (window < 3)
    throw MathError("TooFewPoints", "fit window must cover at least 3 points");

  SlopeFit fit;
  fit.window = window;

  const int first = usable - window;
  double mx = 0.0, my = 0.0;
  for (int i = first; i < usable; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= window;
  my /= window;
  double sxx = 0.0, sxy = 0.0;
  for (int i = first; i < usable; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.global_slope = sxy / sxx;
  const double intercept = my - fit.global_slope * mx;
  double ssr = 0.0;
  for (int i = first; i < usable; ++i) {
    const double r = ys[i] - (intercept + fit.global_slope * xs[i]);
    ssr += r * r;
  }
  fit.stderr_slope = window > 2 ? std::sqrt(ssr / (window - 2) / sxx) : 0.0;

  fit.local_slopes.reserve(usable - 1);
  for (int i = 1; i < usable; ++i)
    fit.local_slopes.push_back((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
  fit.extrapolated_slope = aitken_limit(fit.local_slopes);

  fit.monotone_tail = true;
  if (fit.local_slopes.size() >= 3) {
    bool up = true, down = true;
    for (std::size_t i = 2; i < fit.local_slopes.size(); ++i) {
      const double prev = fit.local_slopes[i - 1], cur = fit.local_slopes[i];
      if (cur > prev + 1e-9) down = false;
      if (cur < prev - 1e-9) up = false;
    }
    fit.monotone_tail = up || down;
  }
  return fit;
}

VerifyReport verify(const SweepRequest& req, const std::vector<int>& N_list,
                    double tolerance, const std::set<int>& singular_positions) {
  if (!req.graph || !req.faces || !req.assignment)
    throw MathError("BadRange", "verify request is missing graph data");
  if (req.family.kind() == FamilyKind::Polynomial)
    throw MathError("BadRange", "power-counting verification needs a decaying family");

  const double p = req.family.p();
  const int d = static_cast<int>(std::lround(req.spectrum.d));
  if (std::abs(req.spectrum.d - d) > 1e-12 || d < 1)
    throw MathError("BadRange", "verification needs a positive integer dimension");

  VerifyReport rep;
  rep.tolerance = tolerance;
  const GraphProfile pr = profile(*req.graph, *req.faces);
  rep.omega_report = omega(pr, p, d);
  if (!singular_positions.empty()) {
    rep.has_tilde = true;
    rep.tilde_report = omega_tilde(*req.graph, *req.faces, p, d, singular_positions);
    rep.predicted = rep.tilde_report.omega_tilde;
    rep.one_sided = true;
  } else {
    rep.predicted = rep.omega_report.omega;
  }

  rep.series = sweep(req, N_list);
  rep.fit = fit_slope(rep.series);

  int sign = 0;
  for (const SweepPoint& pt : rep.series.points) {
    if (!pt.ok) continue;
    const int s = (pt.value > 0.0) - (pt.value < 0.0);
    if (s == 0) continue;
    if (sign == 0)
      sign = s;
    else if (sign != s)
      rep.sign_constant = false;
  }

  const double gap = rep.fit.extrapolated_slope - rep.predicted;
  rep.pass = rep.one_sided ? gap <= tolerance : std::abs(gap) <= tolerance;

  std::ostringstream os;
  os << "predicted " << rep.predicted << ", extrapolated slope "
     << rep.fit.extrapolated_slope << " (global " << rep.fit.global_slope << "), "
     << (rep.one_sided ? "one-sided" : "two-sided") << " tolerance " << tolerance << ": "
     << (rep.pass ? "PASS" : "FAIL");
  rep.detail = os.str();
  return rep;
}

std::string sweep_csv(const SweepSeries& series) {
  std::ostringstream os;
  os.precision(15);
  os << "N,abs_amplitude,local_slope\n";
  bool have_prev = false;
  double px = 0.0, py = 0.0;
  for (const SweepPoint& p : series.points) {
    if (!p.ok) {
      os << p.N << ",," << '"' << p.error << '"' << "\n";
      continue;
    }
    os << p.N << "," << p.abs_amplitude << ",";
    if (have_prev && p.abs_amplitude > 0.0) {
      const double x = std::log(static_cast<double>(p.N));
      const double y = std::log(p.abs_amplitude);
      os << (y - py) / (x - px);
    }
    os << "\n";
    if (p.abs_amplitude > 0.0) {
      px = std::log(static_cast<double>(p.N));
      py = std::log(p.abs_amplitude);
      have_prev = true;
    }
  }
  return os.str();
}

}  // namespace ribamp

#pragma once

// Empirical power counting: sweep the cutoff N over a geometric grid, fit the
// log-log slope of |amplitude| vs N, and compare it with the predicted
// divergence order.  One divided-difference engine is shared by every point
// of a sweep, so the memo carries work from small cutoffs to large ones.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ribamp/amplitude.hpp"
#include "ribamp/powercount.hpp"
#include "ribamp/scalar.hpp"
#include "ribamp/spectra.hpp"

namespace ribamp {

struct SweepRequest {
  const RibbonGraph* graph = nullptr;
  const FaceStructure* faces = nullptr;
  const IndexAssignment* assignment = nullptr;
  SmoothFamily family = SmoothFamily::inverse_power(2);
  Spectrum spectrum;
  std::vector<int> external_indices;
  Backend backend = Backend::Float64;
  SummationMode summation = SummationMode::SequentialCompensated;
  int threads = 0;
  bool parallel_points = true;  // evaluate sweep points concurrently
  std::string descriptor;       // free-form provenance for reports
};

struct SweepPoint {
  int N = 0;
  double value = 0.0;          // signed amplitude
  double abs_amplitude = 0.0;  // |value|, the quantity the fit uses
  double wall_time = 0.0;      // seconds
  std::uint64_t term_count = 0;
  bool ok = false;
  std::string error;  // failure diagnostic when !ok
};

struct SweepSeries {
  std::vector<SweepPoint> points;  // N strictly increasing
  std::string descriptor;
  std::uint64_t memo_hits = 0;    // engine totals across the whole sweep
  std::uint64_t memo_misses = 0;
  double hit_rate() const {
    const double total = static_cast<double>(memo_hits + memo_misses);
    return total > 0 ? static_cast<double>(memo_hits) / total : 0.0;
  }
};

struct SlopeFit {
  double global_slope = 0.0;         // least squares over the window
  double stderr_slope = 0.0;
  std::vector<double> local_slopes;  // log-ratio slopes, one per adjacent pair
  double extrapolated_slope = 0.0;   // accelerated limit of the local slopes,
                                     // kept within [min, max] of the last 3
  int window = 0;                    // number of trailing points fitted
  bool monotone_tail = true;         // local slopes monotone past the first two
};

struct VerifyReport {
  double predicted = 0.0;  // divergence order the slope is compared against
  bool one_sided = false;  // singular runs are upper bounds only
  double tolerance = 0.0;
  bool pass = false;
  bool sign_constant = true;  // amplitude sign constancy across the sweep
  OmegaReport omega_report;
  bool has_tilde = false;
  OmegaTildeReport tilde_report;
  SweepSeries series;
  SlopeFit fit;
  std::string detail;
};

// Evaluates the amplitude at each cutoff in N_list (strictly increasing;
// geometric with ratio >= 2 recommended).  Per-point failures are recorded in
// the series rather than thrown.  A point whose term count would exceed 10^7
// throws BudgetExceeded up front, naming the offending N.
SweepSeries sweep(const SweepRequest& req, const std::vector<int>& N_list);

// Least squares of log|A| against log N over the trailing `window` points
// (0 = all), plus per-pair local slopes and their accelerated limit.
// Requires at least 3 usable points, all with positive |A|.
SlopeFit fit_slope(const SweepSeries& series, int window = 0);

// Sweeps, fits, and compares the extrapolated slope against omega (or
// omega-tilde when singular external positions are given; that comparison is
// one-sided because the singular bound has no matching lower bound).
VerifyReport verify(const SweepRequest& req, const std::vector<int>& N_list,
                    double tolerance, const std::set<int>& singular_positions = {});

// Plot-ready CSV: one line per point, "N,abs_amplitude,local_slope" with an
// empty slope field on the first line (or a failed point's error instead).
std::string sweep_csv(const SweepSeries& series);

}  // namespace ribamp

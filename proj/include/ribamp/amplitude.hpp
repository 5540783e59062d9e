#pragma once

// Ribbon-graph amplitudes over a truncated spectrum.  An amplitude is the sum
// over all assignments of spectrum indices {lo..N} to the unbroken faces of
//
//     prod_vertices f'[corner eigenvalues] / prod_edges f'[side eigenvalues],
//
// where the eigenvalue list of a vertex (edge) is read off the segment labels
// around it.  External legs pin their segment's index; artificially broken
// faces pin theirs through a supplied map.  The weighted form multiplies each
// divided difference by (-1)^m x_1...x_m and compensates with a global
// (-1)^{#odd vertices} / (lambda_ext product) prefactor; the two forms agree
// identically, which the tests exploit.
//
// Summation is deterministic: terms are visited in odometer order, grouped
// into one block per outermost running index, each block accumulated with
// compensated summation, and block totals combined in fixed index order.
// Parallel mode distributes blocks over threads but keeps the identical
// partial-sum tree, so results match the sequential mode bit for bit.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "ribamp/divdiff.hpp"
#include "ribamp/errors.hpp"
#include "ribamp/ribbon.hpp"

namespace ribamp {

enum class SummationMode { SequentialCompensated, ParallelDeterministic };

struct AmplitudeRequest {
  const RibbonGraph* graph = nullptr;
  const FaceStructure* faces = nullptr;
  const IndexAssignment* assignment = nullptr;
  // one spectrum index per leg, in leg order; 0 is the singular index and is
  // accepted only when the spectrum runs in singular mode
  std::vector<int> external_indices;
  int N = 1;    // running indices range over {i_R, ..., N}
  int i_R = 1;  // 1 = unrestricted
  // artificially broken faces: unbroken-face label -> pinned spectrum index
  std::map<int, int> fixed_labels;
  SummationMode summation = SummationMode::SequentialCompensated;
  int threads = 0;  // parallel mode only; 0 = hardware concurrency
  // hard cap on the number of summed terms; evaluation refuses to start above
  // it (the memo table would exhaust memory long before the sum finished)
  std::uint64_t term_budget = 10'000'000;
  // called with the cumulative number of completed terms; must be thread-safe
  // in parallel mode
  std::function<void(std::uint64_t)> progress;
};

template <class S>
struct AmplitudeResult {
  S value{};
  std::uint64_t term_count = 0;
  std::uint64_t memo_hits = 0;    // engine cache hits during this evaluation
  std::uint64_t memo_misses = 0;  // engine cache misses during this evaluation
  double wall_time = 0.0;         // seconds
};

template <class S>
struct SumSplitResult {
  S lhs{};              // full amplitude
  S rhs{};              // sum of restricted amplitudes over (subset, pin map)
  double gap = 0.0;     // |lhs - rhs| / max(1, |lhs|)
  int piece_count = 0;  // number of restricted amplitudes composing rhs
};

namespace detail {

// One multiplicative factor: a divided-difference over resolved spectrum
// indices.  Fixed slots are filled once; running slots are patched per term.
struct FactorPlan {
  std::vector<int> slots;                   // index tuple; running slots start as -1
  std::vector<std::pair<int, int>> patch;   // (slot position, running position)
};

struct AmplitudePlan {
  std::vector<FactorPlan> numerators;    // one per vertex of degree >= 1
  std::vector<FactorPlan> denominators;  // one per edge
  int running_count = 0;
  int lo = 1;  // running range {lo..hi}
  int hi = 1;
  std::uint64_t term_count = 1;
  int odd_degree_vertices = 0;
};

AmplitudePlan build_plan(const AmplitudeRequest& req);

template <class S>
struct CompensatedSum {
  S sum{};
  S carry{};
  void add(const S& x) {
    S t = sum + x;
    if (scalar_ops<S>::abs(sum) >= scalar_ops<S>::abs(x))
      carry = carry + ((sum - t) + x);
    else
      carry = carry + ((x - t) + sum);
    sum = t;
  }
  S total() const { return sum + carry; }
};

template <class S>
S factor_value(DivDiffEngine<S>& eng, const FactorPlan& f, const std::vector<int>& k,
               IndexTuple& scratch) {
  scratch = f.slots;
  for (const auto& [pos, rp] : f.patch) scratch[pos] = k[rp];
  return eng.evaluate(scratch);
}

template <class S>
S weighted_factor_value(DivDiffEngine<S>& eng, const FactorPlan& f,
                        const std::vector<int>& k, IndexTuple& scratch) {
  scratch = f.slots;
  for (const auto& [pos, rp] : f.patch) scratch[pos] = k[rp];
  return weighted_divdiff(eng, scratch);
}

template <class S>
S term_value(DivDiffEngine<S>& eng, const AmplitudePlan& plan, bool weighted,
             const std::vector<int>& k, IndexTuple& scratch) {
  S num = scalar_ops<S>::from_int(1);
  for (const FactorPlan& f : plan.numerators)
    num = num * (weighted ? weighted_factor_value(eng, f, k, scratch)
                          : factor_value(eng, f, k, scratch));
  for (const FactorPlan& f : plan.denominators) {
    S den = weighted ? weighted_factor_value(eng, f, k, scratch)
                     : factor_value(eng, f, k, scratch);
    if (scalar_ops<S>::is_zero(den)) {
      scratch = f.slots;
      for (const auto& [pos, rp] : f.patch) scratch[pos] = k[rp];
      throw MathError("VanishingPropagator",
                      "f'[lambda_" + std::to_string(scratch[0]) + ", lambda_" +
                          std::to_string(scratch[1]) + "] = 0");
    }
    num = num / den;
  }
  return num;
}

// Sum of all terms whose outermost running index equals lo + block, visited
// in odometer order (innermost index fastest).
template <class S>
S block_sum(DivDiffEngine<S>& eng, const AmplitudePlan& plan, bool weighted,
            std::uint64_t block) {
  const int U = plan.running_count;
  IndexTuple scratch;
  if (U == 0) {
    std::vector<int> k;
    return term_value(eng, plan, weighted, k, scratch);
  }
  std::vector<int> k(U, plan.lo);
  k[0] = plan.lo + static_cast<int>(block);
  CompensatedSum<S> acc;
  for (;;) {
    acc.add(term_value(eng, plan, weighted, k, scratch));
    int pos = U - 1;
    while (pos >= 1) {
      if (++k[pos] <= plan.hi) break;
      k[pos] = plan.lo;
      --pos;
    }
    if (pos < 1) break;
  }
  return acc.total();
}

template <class S>
AmplitudeResult<S> evaluate_impl(DivDiffEngine<S>& eng, const AmplitudeRequest& req,
                                 bool weighted) {
  const auto t0 = std::chrono::steady_clock::now();
  const MemoStats before = eng.stats();
  const AmplitudePlan plan = build_plan(req);
  if (plan.term_count > req.term_budget)
    throw BudgetError("CombinatorialBudgetExceeded",
                      std::to_string(plan.term_count) + " terms exceed the budget of " +
                          std::to_string(req.term_budget));

  S prefactor = scalar_ops<S>::from_int(1);
  if (weighted) {
    prefactor = scalar_ops<S>::from_int(plan.odd_degree_vertices % 2 ? -1 : 1);
    for (int idx : req.external_indices) {
      S lam = eng.value_at(idx);
      if (scalar_ops<S>::is_zero(lam))
        throw MathError("ZeroExternalEigenvalue",
                        "weighted form needs nonzero external eigenvalues; index " +
                            std::to_string(idx));
      prefactor = prefactor / lam;
    }
  }

  const std::uint64_t block_count =
      plan.running_count == 0
          ? 1
          : static_cast<std::uint64_t>(plan.hi - plan.lo + 1);
  std::vector<S> blocks(block_count);
  const std::uint64_t terms_per_block = plan.term_count / block_count;

  int threads = req.threads > 0 ? req.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const bool parallel = req.summation == SummationMode::ParallelDeterministic &&
                        threads > 1 && block_count > 1;

  std::atomic<std::uint64_t> terms_done{0};
  auto report = [&](std::uint64_t done_in_block) {
    if (!req.progress) return;
    req.progress(terms_done.fetch_add(done_in_block) + done_in_block);
  };

  if (!parallel) {
    for (std::uint64_t b = 0; b < block_count; ++b) {
      blocks[b] = block_sum(eng, plan, weighted, b);
      report(terms_per_block);
    }
  } else {
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    const int nworkers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), block_count));
    std::vector<std::exception_ptr> errors(nworkers);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            const std::uint64_t b = next.fetch_add(1);
            if (b >= block_count) return;
            blocks[b] = block_sum(eng, plan, weighted, b);
            report(terms_per_block);
          }
        } catch (...) {
          errors[w] = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  CompensatedSum<S> total;
  for (const S& b : blocks) total.add(b);

  AmplitudeResult<S> res;
  res.value = prefactor * total.total();
  res.term_count = plan.term_count;
  const MemoStats after = eng.stats();
  res.memo_hits = after.hits - before.hits;
  res.memo_misses = after.misses - before.misses;
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace detail

// Standard amplitude; honors i_R and pinned labels in the request.
template <class S>
AmplitudeResult<S> evaluate(DivDiffEngine<S>& eng, const AmplitudeRequest& req) {
  return detail::evaluate_impl(eng, req, false);
}

// Weighted form: identical value, computed through sign-and-product weighted
// divided differences with the global prefactor.
template <class S>
AmplitudeResult<S> evaluate_weighted(DivDiffEngine<S>& eng, const AmplitudeRequest& req) {
  return detail::evaluate_impl(eng, req, true);
}

// Running indices restricted to {i_R..N}.
template <class S>
AmplitudeResult<S> evaluate_restricted(DivDiffEngine<S>& eng, AmplitudeRequest req,
                                       int i_R) {
  req.i_R = i_R;
  return detail::evaluate_impl(eng, req, false);
}

// Checks the decomposition of the full amplitude into restricted amplitudes
// of graphs whose unbroken faces are partially pinned below i_R:
//   full = sum over subsets b of unbroken faces,
//          sum over pin maps gamma : b -> {1..i_R-1},
//          restricted amplitude with b pinned at gamma.
template <class S>
SumSplitResult<S> sum_split_check(DivDiffEngine<S>& eng, const RibbonGraph& g,
                                  const FaceStructure& faces,
                                  const IndexAssignment& assignment,
                                  const std::vector<int>& external_indices, int N,
                                  int i_R) {
  const std::vector<int> labels = faces.unbroken_labels();
  const int U = static_cast<int>(labels.size());
  if (U > 3)
    throw BudgetError("CombinatorialBudgetExceeded",
                      "sum splitting over " + std::to_string(U) + " unbroken faces");
  if (i_R > 6)
    throw BudgetError("CombinatorialBudgetExceeded",
                      "sum splitting with i_R = " + std::to_string(i_R));
  if (i_R < 1 || i_R > N) throw MathError("BadRange", "need 1 <= i_R <= N");

  AmplitudeRequest base;
  base.graph = &g;
  base.faces = &faces;
  base.assignment = &assignment;
  base.external_indices = external_indices;
  base.N = N;

  SumSplitResult<S> out;
  out.lhs = evaluate(eng, base).value;

  detail::CompensatedSum<S> rhs;
  for (std::uint32_t mask = 0; mask < (1u << U); ++mask) {
    std::vector<int> b;
    for (int i = 0; i < U; ++i)
      if (mask & (1u << i)) b.push_back(labels[i]);
    // odometer over gamma : b -> {1..i_R-1}; empty subset has one empty map
    std::vector<int> gamma(b.size(), 1);
    if (!b.empty() && i_R - 1 < 1) continue;  // no admissible pin maps
    for (;;) {
      AmplitudeRequest piece = base;
      piece.i_R = i_R;
      for (std::size_t i = 0; i < b.size(); ++i) piece.fixed_labels[b[i]] = gamma[i];
      rhs.add(evaluate(eng, piece).value);
      ++out.piece_count;
      std::size_t pos = b.size();
      while (pos > 0) {
        if (++gamma[pos - 1] <= i_R - 1) break;
        gamma[pos - 1] = 1;
        --pos;
      }
      if (pos == 0) break;
    }
  }
  out.rhs = rhs.total();
  const double l = scalar_ops<S>::to_double(out.lhs);
  const double r = scalar_ops<S>::to_double(out.rhs);
  out.gap = std::abs(l - r) / std::max(1.0, std::abs(l));
  return out;
}

}  // namespace ribamp

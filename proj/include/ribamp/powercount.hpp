#pragma once

// Divergence-order predictors for ribbon-graph amplitudes over a spectrum of
// growth |lambda_k| ~ k^(1/d) and a function of precise order p:
//
//   omega       = U + (p/d)(E_fi - V_fi)              (regular spectra)
//   omega_tilde = max over artificially broken subsets, adding the
//                 ((p+1)/d)(E_10 - V_10) terms that singular modes
//                 (f'(lambda) = 0) switch on
//
// plus the vertex->edge injection along minimal faces that powers the upper
// bound's cancellation argument, and maximality diagnostics.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ribamp/ribbon.hpp"

namespace ribamp {

struct OmegaReport {
  double omega = 0.0;
  int unbroken = 0;             // U
  int fully_internal_edges = 0; // E_fi
  int fully_internal_vertices = 0;  // V_fi
  double p = 0.0;
  int d = 1;
  bool valence_warning = false;  // some vertex has degree < 3
};

OmegaReport omega(const GraphProfile& pr, double p, int d);

// Largest omega attainable at fixed leg count n >= 1 and loop order L >= 1:
// L + (p/d)(L-1), attained by planar graphs with all legs on one broken face
// (U = L) and a maximal fully-internal surplus E_fi - V_fi = L - 1.
double max_omega(int n, int L, double p, int d);

struct OmegaTildeRow {
  std::vector<int> subset;  // labels of the artificially broken faces
  int U_b = 0;
  int E_fi_b = 0;
  int V_fi_b = 0;
  int E_10 = 0;
  int V_10 = 0;
  double value = 0.0;
};

struct OmegaTildeReport {
  double omega_tilde = 0.0;
  std::vector<int> argmax_subset;
  std::vector<OmegaTildeRow> table;  // one row per subset, empty set first
  double p = 0.0;
  int d = 1;
};

// Exhaustive scan over subsets b of unbroken faces (U <= 20, else
// BudgetError("SubsetBudgetExceeded")).  singular_externals lists the leg
// numbers whose external index carries a singular eigenvalue.  Per subset,
// all b-faces are fixed to the singular index (the maximizing assignment);
// E_10/V_10 count edges/vertices with exactly one incidence to a singular
// label and every other incidence on a still-unbroken face.
OmegaTildeReport omega_tilde(const RibbonGraph& g, const FaceStructure& faces, double p,
                             int d, const std::set<int>& singular_externals);

// The E_10/V_10 counts for an arbitrary singular-label set (zero_labels must
// be singular external legs or members of b_labels); exposed for the
// monotonicity property of the subset scan.
struct TenCounts {
  int edges = 0;
  int vertices = 0;
};
TenCounts count_ten(const RibbonGraph& g, const FaceStructure& faces,
                    const std::set<int>& b_labels, const std::set<int>& zero_labels);

// Injection from fully internal ("blue") vertices to fully internal edges
// along minimal faces.  total_order lists the unbroken-face labels from
// smallest to largest; the returned map satisfies, for every fully internal
// vertex v: Gamma(v) is incident to v, fully internal, borders the minimal
// face bordering v, and no edge is assigned twice.  Throws
// MathError("InternalAssertion") if the assignment cannot be completed
// (algorithm bug, not bad input), MathError("BadRange") if total_order is
// not a permutation of the unbroken labels.
std::map<int, int> gamma_injection(const RibbonGraph& g, const FaceStructure& faces,
                                   const std::vector<int>& total_order);

// Independent re-verification of an assignment's defining properties:
// defined exactly on the fully internal vertices, injective, each vertex
// mapped to an incident fully internal edge that borders the minimal face
// (under total_order) among the faces at that vertex.  Returns an empty
// string when all properties hold, else a description of the violation.
std::string gamma_check(const RibbonGraph& g, const FaceStructure& faces,
                        const std::vector<int>& total_order,
                        const std::map<int, int>& gamma);

struct MaximalityReport {
  bool is_maximal = false;
  bool genus_zero = false;
  bool unbroken_equals_loops = false;  // U = L, necessary for maximality
  double omega_value = 0.0;
  double max_value = 0.0;
  std::string reasons;
};

// Requires a connected graph with n >= 1 legs and L >= 1 loops.
MaximalityReport classify_maximal(const GraphProfile& pr, double p, int d);

// The per-face power bookkeeping that looks plausible but ignores how
// divided differences couple faces: every edge credits +p to the
// lowest-numbered running face it borders, every vertex debits p from the
// highest-numbered running face it borders, and faces sum independently as
// N^(1 + e_u/d), clipped at zero.  Kept as a regression foil: on the nested
// two-loop graph it overshoots the true order.
double naive_power_estimate(const RibbonGraph& g, const FaceStructure& faces, double p,
                            int d);

}  // namespace ribamp

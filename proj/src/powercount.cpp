#include "ribamp/powercount.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace ribamp {

OmegaReport omega(const GraphProfile& pr, double p, int d) {
  if (d <= 0 || p < 0.0)
    throw MathError("BadRange", "omega needs d > 0 and p >= 0");
  OmegaReport rep;
  rep.unbroken = pr.unbroken;
  rep.fully_internal_edges = pr.fully_internal_edges;
  rep.fully_internal_vertices = pr.fully_internal_vertices;
  rep.p = p;
  rep.d = d;
  rep.valence_warning = pr.vertices > 0 && pr.min_degree < 3;
  rep.omega = pr.unbroken +
              (p / d) * (pr.fully_internal_edges - pr.fully_internal_vertices);
  return rep;
}

double max_omega(int n, int L, double p, int d) {
  if (n < 1) throw MathError("BadRange", "max_omega needs at least one leg");
  if (L < 1) throw MathError("BadRange", "max_omega needs loop order >= 1");
  if (d <= 0 || p < 0.0) throw MathError("BadRange", "max_omega needs d > 0 and p >= 0");
  return L + (p / d) * (L - 1);
}

namespace {

// A label is "good" w.r.t. a break set if it names a face that is unbroken
// and not being treated as broken.
struct LabelClassifier {
  const FaceStructure& faces;
  const std::set<int>& b_labels;
  const std::set<int>& zero_labels;

  bool is_zero(int label) const { return zero_labels.count(label) > 0; }
  bool is_good(int label) const {
    return label > faces.leg_count && !b_labels.count(label) &&
           !faces.fixed_label_index.count(label);
  }
};

}  // namespace

TenCounts count_ten(const RibbonGraph& g, const FaceStructure& faces,
                    const std::set<int>& b_labels, const std::set<int>& zero_labels) {
  LabelClassifier cl{faces, b_labels, zero_labels};
  TenCounts tc;
  for (const auto& e : g.edges) {
    int la = faces.label_of[e[0]];
    int lb = faces.label_of[e[1]];
    if (cl.is_zero(la) + cl.is_zero(lb) != 1) continue;
    int other = cl.is_zero(la) ? lb : la;
    if (cl.is_good(other)) ++tc.edges;
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 0) continue;
    int zeros = 0;
    bool rest_good = true;
    for (int dart : g.rotations[v]) {
      int label = faces.label_of[dart];
      if (cl.is_zero(label))
        ++zeros;
      else if (!cl.is_good(label))
        rest_good = false;
    }
    if (zeros == 1 && rest_good) ++tc.vertices;
  }
  return tc;
}

OmegaTildeReport omega_tilde(const RibbonGraph& g, const FaceStructure& faces, double p,
                             int d, const std::set<int>& singular_externals) {
  if (d <= 0 || p < 0.0)
    throw MathError("BadRange", "omega_tilde needs d > 0 and p >= 0");
  for (int leg : singular_externals)
    if (leg < 1 || leg > faces.leg_count)
      throw MathError("BadRange",
                      "singular position " + std::to_string(leg) + " is not a leg");

  std::vector<int> labels = faces.unbroken_labels();
  const int U = static_cast<int>(labels.size());
  if (U > 20)
    throw BudgetError("SubsetBudgetExceeded",
                      "subset scan over " + std::to_string(U) + " unbroken faces");

  OmegaTildeReport rep;
  rep.p = p;
  rep.d = d;

  const int n = faces.leg_count;
  for (std::uint32_t mask = 0; mask < (1u << U); ++mask) {
    std::set<int> b;
    for (int i = 0; i < U; ++i)
      if (mask & (1u << i)) b.insert(labels[i]);
    std::set<int> zeros(singular_externals.begin(), singular_externals.end());
    zeros.insert(b.begin(), b.end());

    LabelClassifier good_check{faces, b, zeros};
    OmegaTildeRow row;
    row.subset.assign(b.begin(), b.end());
    row.U_b = U - static_cast<int>(b.size());
    for (const auto& e : g.edges)
      if (good_check.is_good(faces.label_of[e[0]]) &&
          good_check.is_good(faces.label_of[e[1]]))
        ++row.E_fi_b;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.degree(v) == 0) continue;
      bool all_good = true;
      for (int dart : g.rotations[v])
        if (!good_check.is_good(faces.label_of[dart])) {
          all_good = false;
          break;
        }
      if (all_good) ++row.V_fi_b;
    }
    TenCounts tc = count_ten(g, faces, b, zeros);
    row.E_10 = tc.edges;
    row.V_10 = tc.vertices;
    row.value = row.U_b + (p / d) * (row.E_fi_b - row.V_fi_b) +
                ((p + 1.0) / d) * (row.E_10 - row.V_10);
    (void)n;

    if (mask == 0 || row.value > rep.omega_tilde) {
      rep.omega_tilde = row.value;
      rep.argmax_subset = row.subset;
    }
    rep.table.push_back(std::move(row));
  }
  return rep;
}

std::map<int, int> gamma_injection(const RibbonGraph& g, const FaceStructure& faces,
                                   const std::vector<int>& total_order) {
  std::vector<int> expect = faces.unbroken_labels();
  {
    std::vector<int> sorted_order = total_order;
    std::sort(sorted_order.begin(), sorted_order.end());
    if (sorted_order != expect)
      throw MathError("BadRange",
                      "total order must be a permutation of the unbroken-face labels");
  }

  const int nf = static_cast<int>(faces.faces.size());
  std::vector<char> blue_face(nf, 0);
  for (int fi = 0; fi < nf; ++fi)
    if (!faces.faces[fi].broken) blue_face[fi] = 1;

  auto vertex_blue = [&](int v) {
    if (g.degree(v) == 0) return false;
    for (int dart : g.rotations[v])
      if (!blue_face[faces.face_of[dart]]) return false;
    return true;
  };

  std::vector<char> edge_used(g.edge_count(), 0);
  std::map<int, int> gamma;

  // faces in total-order rank; each pass peels the minimal remaining one
  for (int label : total_order) {
    int fi = faces.face_of_label(label);
    if (!blue_face[fi]) continue;  // already peeled? cannot happen: labels unique
    const Face& face = faces.faces[fi];

    auto borders_face = [&](int e) {
      return faces.face_of[g.edges[e][0]] == fi || faces.face_of[g.edges[e][1]] == fi;
    };
    auto doubly_borders = [&](int e) {
      return faces.face_of[g.edges[e][0]] == fi && faces.face_of[g.edges[e][1]] == fi;
    };

    std::vector<int> blue_here;  // blue vertices bordering this face, by id
    {
      std::set<int> seen;
      for (const FaceItem& it : face.items) {
        int v = g.vertex_of[it.value];
        if (seen.insert(v).second && !gamma.count(v) && vertex_blue(v))
          blue_here.push_back(v);
      }
    }

    auto assign = [&](int v, int e) {
      gamma[v] = e;
      edge_used[e] = 1;
    };

    // 1-valent vertices first: their unique edge borders the face twice and
    // would otherwise be skipped below
    for (int v : blue_here) {
      if (gamma.count(v) || g.degree(v) != 1) continue;
      int e = g.edge_of[g.rotations[v][0]];
      if (e < 0 || edge_used[e])
        throw MathError("InternalAssertion",
                        "1-valent vertex has no free edge on its face");
      assign(v, e);
    }

    // boundary walk: first occurrence of a blue vertex takes its corner edge
    // unless that edge borders the face on both sides
    for (const FaceItem& it : face.items) {
      int v = g.vertex_of[it.value];
      if (gamma.count(v) || !vertex_blue(v)) continue;
      int e = g.edge_of[it.value];
      if (e >= 0 && !doubly_borders(e) && !edge_used[e]) assign(v, e);
    }

    // leftover vertices (every incident edge doubly borders the face): any
    // unused incident edge on this face still meets all the conditions
    for (int v : blue_here) {
      if (gamma.count(v)) continue;
      bool done = false;
      for (int dart : g.rotations[v]) {
        int e = g.edge_of[dart];
        if (e >= 0 && !edge_used[e] && borders_face(e)) {
          assign(v, e);
          done = true;
          break;
        }
      }
      if (!done)
        throw MathError("InternalAssertion",
                        "blue vertex on the minimal face has no free edge");
    }

    blue_face[fi] = 0;
  }
  return gamma;
}

std::string gamma_check(const RibbonGraph& g, const FaceStructure& faces,
                        const std::vector<int>& total_order,
                        const std::map<int, int>& gamma) {
  std::map<int, int> rank;
  for (std::size_t i = 0; i < total_order.size(); ++i)
    rank[total_order[i]] = static_cast<int>(i);

  auto face_unbroken = [&](int fi) { return !faces.faces[fi].broken; };
  auto fully_internal_vertex = [&](int v) {
    if (g.degree(v) == 0) return false;
    for (int dart : g.rotations[v])
      if (!face_unbroken(faces.face_of[dart])) return false;
    return true;
  };
  auto fully_internal_edge = [&](int e) {
    return face_unbroken(faces.face_of[g.edges[e][0]]) &&
           face_unbroken(faces.face_of[g.edges[e][1]]);
  };

  for (const auto& [v, e] : gamma) {
    (void)e;
    if (v < 0 || v >= g.vertex_count())
      return "assignment names vertex id " + std::to_string(v) + " outside the graph";
  }

  for (int v = 0; v < g.vertex_count(); ++v) {
    const bool fi = fully_internal_vertex(v);
    const bool assigned = gamma.count(v) > 0;
    if (fi && !assigned) return "fully internal vertex " + g.vertex_names[v] + " unassigned";
    if (!fi && assigned) return "vertex " + g.vertex_names[v] + " assigned but not fully internal";
    if (!assigned) continue;

    const int e = gamma.at(v);
    if (e < 0 || e >= g.edge_count()) return "assignment out of edge range";
    if (g.vertex_of[g.edges[e][0]] != v && g.vertex_of[g.edges[e][1]] != v)
      return "edge of vertex " + g.vertex_names[v] + " is not incident";
    if (!fully_internal_edge(e))
      return "edge of vertex " + g.vertex_names[v] + " is not fully internal";

    int min_rank = -1;
    for (int dart : g.rotations[v]) {
      const int r = rank.at(faces.faces[faces.face_of[dart]].label);
      if (min_rank < 0 || r < min_rank) min_rank = r;
    }
    const int ra = rank.at(faces.faces[faces.face_of[g.edges[e][0]]].label);
    const int rb = rank.at(faces.faces[faces.face_of[g.edges[e][1]]].label);
    if (ra != min_rank && rb != min_rank)
      return "edge of vertex " + g.vertex_names[v] + " misses the minimal face";
  }

  std::set<int> used;
  for (const auto& [v, e] : gamma) {
    (void)v;
    if (!used.insert(e).second) return "edge " + std::to_string(e) + " assigned twice";
  }
  return "";
}

MaximalityReport classify_maximal(const GraphProfile& pr, double p, int d) {
  if (pr.components != 1)
    throw MathError("BadRange", "maximality classification needs a connected graph");
  MaximalityReport rep;
  rep.omega_value = omega(pr, p, d).omega;
  rep.max_value = max_omega(pr.legs, pr.loops, p, d);
  rep.is_maximal = rep.omega_value >= rep.max_value - 1e-9;
  rep.genus_zero = pr.genus == 0;
  rep.unbroken_equals_loops = pr.unbroken == pr.loops;
  std::ostringstream why;
  why << "omega " << rep.omega_value << (rep.is_maximal ? " reaches " : " below ")
      << "max " << rep.max_value << "; genus " << pr.genus
      << (rep.genus_zero ? " (planar)" : " (not planar)") << "; U " << pr.unbroken
      << (rep.unbroken_equals_loops ? " = " : " != ") << "L " << pr.loops;
  rep.reasons = why.str();
  return rep;
}

double naive_power_estimate(const RibbonGraph& g, const FaceStructure& faces, double p,
                            int d) {
  if (d <= 0 || p < 0.0)
    throw MathError("BadRange", "naive estimate needs d > 0 and p >= 0");
  auto running = [&](int label) {
    return label > faces.leg_count && !faces.fixed_label_index.count(label);
  };
  std::map<int, double> net;  // running label -> accumulated edge/vertex powers
  for (int label : faces.unbroken_labels()) net[label] = 0.0;

  for (const auto& e : g.edges) {
    int la = faces.label_of[e[0]];
    int lb = faces.label_of[e[1]];
    int pick = -1;
    if (running(la)) pick = la;
    if (running(lb) && (pick < 0 || lb < pick)) pick = lb;
    if (pick >= 0) net[pick] += p;
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    int pick = -1;
    for (int dart : g.rotations[v]) {
      int label = faces.label_of[dart];
      if (running(label) && label > pick) pick = label;
    }
    if (pick >= 0) net[pick] -= p;
  }
  double total = 0.0;
  for (const auto& [label, e_u] : net) {
    (void)label;
    total += std::max(0.0, 1.0 + e_u / d);
  }
  return total;
}

}  // namespace ribamp

#include "ribamp/ribbon.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace ribamp {

std::vector<int> Face::dart_list() const {
  std::vector<int> out;
  out.reserve(items.size());
  for (const FaceItem& it : items)
    if (!it.is_marker) out.push_back(it.value);
  return out;
}

std::vector<int> FaceStructure::unbroken_labels() const {
  std::vector<int> out;
  for (const Face& f : faces)
    if (!f.broken) out.push_back(f.label);
  std::sort(out.begin(), out.end());
  return out;
}

int FaceStructure::face_of_label(int label) const {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].label == label) return static_cast<int>(i);
  throw MathError("BadRange", "no face carries label " + std::to_string(label));
}

RibbonGraph build_graph(const GraphDescription& in) {
  RibbonGraph g;
  g.name = in.name;

  std::unordered_map<std::string, int> dart_id;
  std::unordered_map<std::string, int> vertex_id;
  for (const auto& [vname, rot] : in.vertices) {
    if (!vertex_id.emplace(vname, static_cast<int>(g.rotations.size())).second)
      throw ParseError("DuplicateVertex", "vertex '" + vname + "' declared twice");
    g.vertex_names.push_back(vname);
    std::vector<int> ids;
    ids.reserve(rot.size());
    for (const std::string& dname : rot) {
      auto [it, fresh] = dart_id.emplace(dname, static_cast<int>(g.dart_names.size()));
      if (!fresh)
        throw ParseError("DuplicateDart",
                         "dart '" + dname + "' appears twice across vertex rotations");
      g.dart_names.push_back(dname);
      ids.push_back(it->second);
    }
    g.rotations.push_back(std::move(ids));
  }

  const int nd = g.dart_count();
  g.vertex_of.assign(nd, -1);
  g.pos_of.assign(nd, -1);
  g.theta.assign(nd, -1);
  g.edge_of.assign(nd, -1);
  g.leg_of.assign(nd, 0);
  for (int v = 0; v < g.vertex_count(); ++v)
    for (std::size_t p = 0; p < g.rotations[v].size(); ++p) {
      g.vertex_of[g.rotations[v][p]] = v;
      g.pos_of[g.rotations[v][p]] = static_cast<int>(p);
    }

  auto lookup = [&](const std::string& dname) {
    auto it = dart_id.find(dname);
    if (it == dart_id.end())
      throw ParseError("UnknownDart", "dart '" + dname + "' not listed at any vertex");
    return it->second;
  };
  auto claim = [&](int d, const std::string& dname) {
    if (g.edge_of[d] >= 0 || g.leg_of[d] > 0)
      throw ParseError("DuplicateDart",
                       "dart '" + dname + "' used by more than one edge/ext line");
  };

  for (const auto& [na, nb] : in.edge_pairs) {
    int a = lookup(na), b = lookup(nb);
    if (a == b)
      throw ParseError("SelfPairedDart", "edge pairs dart '" + na + "' with itself");
    claim(a, na);
    claim(b, nb);
    int e = g.edge_count();
    g.edges.push_back({a, b});
    g.edge_of[a] = g.edge_of[b] = e;
    g.theta[a] = b;
    g.theta[b] = a;
  }

  std::map<int, std::string> leg_names;
  for (const auto& [num, dname] : in.legs) {
    if (num < 1)
      throw ParseError("LegNumberGap", "leg numbers start at 1, got " + std::to_string(num));
    if (!leg_names.emplace(num, dname).second)
      throw ParseError("LegNumberGap", "leg " + std::to_string(num) + " given twice");
  }
  int expect = 1;
  for (const auto& [num, dname] : leg_names) {
    if (num != expect)
      throw ParseError("LegNumberGap", "leg numbers must be 1..n without gaps; missing " +
                                           std::to_string(expect));
    ++expect;
    int d = lookup(dname);
    claim(d, dname);
    g.legs.push_back(d);
    g.leg_of[d] = num;
  }

  for (int d = 0; d < nd; ++d)
    if (g.theta[d] < 0 && g.leg_of[d] == 0)
      throw ParseError("UnpairedDart",
                       "dart '" + g.dart_names[d] + "' is covered by no edge or ext line");
  return g;
}

FaceStructure trace_faces(const RibbonGraph& g) {
  FaceStructure fs;
  fs.leg_count = g.leg_count();
  const int nd = g.dart_count();
  fs.face_of.assign(nd, -1);
  fs.label_of.assign(nd, 0);

  std::vector<char> seen(nd, 0);
  int next_unbroken = g.leg_count() + 1;
  for (int start = 0; start < nd; ++start) {
    if (seen[start]) continue;
    Face face;
    int cur = start;
    do {
      seen[cur] = 1;
      fs.face_of[cur] = static_cast<int>(fs.faces.size());
      face.items.push_back({false, cur});
      if (g.leg_of[cur] > 0) {
        face.items.push_back({true, g.leg_of[cur]});
        face.broken = true;
        cur = g.sigma(cur);
      } else {
        cur = g.sigma(g.theta[cur]);
      }
    } while (cur != start);

    if (face.broken) {
      ++fs.broken_count;
    } else {
      ++fs.unbroken_count;
      face.label = next_unbroken++;
    }
    fs.faces.push_back(std::move(face));
  }

  for (const Face& face : fs.faces) {
    if (!face.broken) {
      for (const FaceItem& it : face.items) fs.label_of[it.value] = face.label;
      continue;
    }
    // segment label = leg number of the nearest marker strictly before the
    // dart in cyclic orbit order
    int current = 0;
    for (auto rit = face.items.rbegin(); rit != face.items.rend(); ++rit)
      if (rit->is_marker) {
        current = rit->value;
        break;
      }
    for (const FaceItem& it : face.items) {
      if (it.is_marker)
        current = it.value;
      else
        fs.label_of[it.value] = current;
    }
  }
  return fs;
}

IndexAssignment index_assignment(const RibbonGraph& g, const FaceStructure& faces) {
  IndexAssignment ia;
  ia.alpha.resize(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    ia.alpha[v].reserve(g.rotations[v].size());
    for (int d : g.rotations[v]) ia.alpha[v].push_back(faces.label_of[d]);
  }
  ia.beta.reserve(g.edges.size());
  for (const auto& e : g.edges)
    ia.beta.push_back({faces.label_of[e[0]], faces.label_of[e[1]]});
  return ia;
}

namespace {
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

GraphProfile profile(const RibbonGraph& g, const FaceStructure& faces) {
  GraphProfile pr;
  pr.vertices = g.vertex_count();
  pr.edges = g.edge_count();
  pr.legs = g.leg_count();
  pr.faces = static_cast<int>(faces.faces.size());
  pr.broken = faces.broken_count;
  pr.unbroken = faces.unbroken_count;

  Dsu dsu(g.vertex_count());
  for (const auto& e : g.edges) dsu.unite(g.vertex_of[e[0]], g.vertex_of[e[1]]);

  std::map<int, std::array<int, 3>> comp;  // root -> (V, E, F)
  for (int v = 0; v < g.vertex_count(); ++v) comp[dsu.find(v)][0]++;
  for (const auto& e : g.edges) comp[dsu.find(g.vertex_of[e[0]])][1]++;
  for (const Face& face : faces.faces)
    comp[dsu.find(g.vertex_of[face.items.front().value])][2]++;

  pr.components = static_cast<int>(comp.size());
  pr.loops = pr.edges - pr.vertices + pr.components;
  for (const auto& [root, vef] : comp) {
    const auto& [cv, ce, cf] = vef;
    if (cf == 0 && ce == 0) {
      // bare vertex: a point on a sphere
      pr.genus_per_component.push_back(0);
      continue;
    }
    int loops_c = ce - cv + 1;
    int twice_genus = loops_c + 1 - cf;
    if (twice_genus < 0 || twice_genus % 2 != 0)
      throw MathError("NonOrientableInconsistency",
                      "component genus 2g = " + std::to_string(twice_genus) +
                          " is negative or odd; face tracing is inconsistent");
    pr.genus_per_component.push_back(twice_genus / 2);
    pr.genus += twice_genus / 2;
  }

  for (int v = 0; v < g.vertex_count(); ++v) {
    int deg = g.degree(v);
    if (v == 0) {
      pr.min_degree = pr.max_degree = deg;
    } else {
      pr.min_degree = std::min(pr.min_degree, deg);
      pr.max_degree = std::max(pr.max_degree, deg);
    }
    if (deg == 0) continue;
    bool internal = true;
    for (int d : g.rotations[v])
      if (faces.faces[faces.face_of[d]].broken) {
        internal = false;
        break;
      }
    if (internal) ++pr.fully_internal_vertices;
  }
  for (const auto& e : g.edges) {
    if (!faces.faces[faces.face_of[e[0]]].broken &&
        !faces.faces[faces.face_of[e[1]]].broken)
      ++pr.fully_internal_edges;
  }
  return pr;
}

FaceStructure artificially_break(const FaceStructure& faces, const std::set<int>& b_labels,
                                 const std::map<int, int>& gamma) {
  if (gamma.size() != b_labels.size())
    throw MathError("BadRange", "gamma must fix exactly the faces being broken");
  for (const auto& [label, idx] : gamma) {
    (void)idx;
    if (!b_labels.count(label))
      throw MathError("BadRange", "gamma fixes label " + std::to_string(label) +
                                      " outside the broken subset");
  }
  FaceStructure out = faces;
  for (int label : b_labels) {
    auto it = gamma.find(label);
    if (it == gamma.end())
      throw MathError("BadRange", "no fixed index for label " + std::to_string(label));
    bool found = false;
    for (Face& f : out.faces) {
      if (f.label == label) {
        if (f.broken)
          throw MathError("NotUnbrokenFace",
                          "face " + std::to_string(label) + " is already broken");
        f.broken = true;
        ++out.broken_count;
        --out.unbroken_count;
        out.fixed_label_index[label] = it->second;
        found = true;
        break;
      }
    }
    if (!found)
      throw MathError("NotUnbrokenFace",
                      "label " + std::to_string(label) + " names no unbroken face");
  }
  return out;
}

}  // namespace ribamp

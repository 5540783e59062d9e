#include "ribamp/randgraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ribamp/errors.hpp"

namespace ribamp {

namespace {

bool connected(const std::vector<int>& dart_vertex, const std::vector<std::array<int, 2>>& pairs,
               int nv) {
  if (nv == 0) return false;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& pr : pairs) {
    int a = find(dart_vertex[pr[0]]);
    int b = find(dart_vertex[pr[1]]);
    if (a != b) parent[a] = b;
  }
  int root = find(0);
  for (int v = 1; v < nv; ++v)
    if (find(v) != root) return false;
  return true;
}

}  // namespace

RibbonGraph random_ribbon_graph(std::mt19937& rng, const RandomGraphOptions& opt) {
  if (opt.min_vertices < 1 || opt.max_vertices < opt.min_vertices ||
      opt.min_degree < 1 || opt.max_degree < opt.min_degree || opt.min_legs < 0 ||
      opt.max_legs < opt.min_legs)
    throw MathError("BadRange", "inconsistent random graph options");

  std::uniform_int_distribution<int> pick_v(opt.min_vertices, opt.max_vertices);
  std::uniform_int_distribution<int> pick_deg(opt.min_degree, opt.max_degree);
  std::uniform_int_distribution<int> pick_legs(opt.min_legs, opt.max_legs);

  for (int attempt = 0; attempt < 4096; ++attempt) {
    const int nv = pick_v(rng);
    std::vector<int> degree(nv);
    int total = 0;
    for (int v = 0; v < nv; ++v) total += degree[v] = pick_deg(rng);

    int legs = pick_legs(rng);
    if ((total - legs) % 2 != 0) {
      if (legs + 1 <= opt.max_legs)
        ++legs;
      else if (legs - 1 >= opt.min_legs)
        --legs;
      else
        continue;  // parity unreachable within the leg bounds
    }
    if (total - legs < 2 && total != legs) continue;

    std::vector<int> dart_vertex;
    dart_vertex.reserve(total);
    for (int v = 0; v < nv; ++v)
      for (int i = 0; i < degree[v]; ++i) dart_vertex.push_back(v);

    std::vector<int> ids(total);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);

    std::vector<int> leg_darts(ids.begin(), ids.begin() + legs);
    std::vector<std::array<int, 2>> pairs;
    for (int i = legs; i + 1 < total; i += 2)
      pairs.push_back({ids[i], ids[i + 1]});

    if (!connected(dart_vertex, pairs, nv)) continue;

    GraphDescription desc;
    desc.name = "random";
    auto dname = [](int id) { return "d" + std::to_string(id); };
    std::vector<std::vector<std::string>> rot(nv);
    for (int id = 0; id < total; ++id) rot[dart_vertex[id]].push_back(dname(id));
    for (int v = 0; v < nv; ++v) {
      std::shuffle(rot[v].begin(), rot[v].end(), rng);
      desc.vertices.emplace_back("v" + std::to_string(v), rot[v]);
    }
    for (const auto& pr : pairs) desc.edge_pairs.emplace_back(dname(pr[0]), dname(pr[1]));
    for (int i = 0; i < legs; ++i) desc.legs.emplace_back(i + 1, dname(leg_darts[i]));
    return build_graph(desc);
  }
  throw MathError("InternalAssertion", "random graph generation failed to converge");
}

GraphDescription relabel_description(const RibbonGraph& g, std::mt19937& rng) {
  const int nd = g.dart_count();
  std::vector<int> perm(nd);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto dname = [&](int dart) { return "r" + std::to_string(perm[dart]); };

  GraphDescription desc;
  desc.name = g.name + "_relabeled";

  std::vector<int> vorder(g.vertex_count());
  std::iota(vorder.begin(), vorder.end(), 0);
  std::shuffle(vorder.begin(), vorder.end(), rng);
  for (int v : vorder) {
    const auto& rot = g.rotations[v];
    std::vector<std::string> names;
    names.reserve(rot.size());
    if (!rot.empty()) {
      // cyclic shift: same rotation system, different written starting point
      std::uniform_int_distribution<std::size_t> shift(0, rot.size() - 1);
      const std::size_t s = shift(rng);
      for (std::size_t i = 0; i < rot.size(); ++i)
        names.push_back(dname(rot[(i + s) % rot.size()]));
    }
    desc.vertices.emplace_back(g.vertex_names[v], names);
  }

  std::vector<int> eorder(g.edge_count());
  std::iota(eorder.begin(), eorder.end(), 0);
  std::shuffle(eorder.begin(), eorder.end(), rng);
  std::bernoulli_distribution flip(0.5);
  for (int e : eorder) {
    int a = g.edges[e][0], b = g.edges[e][1];
    if (flip(rng)) std::swap(a, b);
    desc.edge_pairs.emplace_back(dname(a), dname(b));
  }
  for (std::size_t i = 0; i < g.legs.size(); ++i)
    desc.legs.emplace_back(static_cast<int>(i) + 1, dname(g.legs[i]));
  return desc;
}

}  // namespace ribamp

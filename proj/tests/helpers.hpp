#pragma once

// Shared fixtures for the test suites: corpus loading and a few inline graphs.

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "ribamp/dsl.hpp"
#include "ribamp/errors.hpp"
#include "ribamp/ribbon.hpp"

namespace testutil {

// Runs fn, expecting it to throw an error of type E; returns the stable error
// code, or a sentinel describing what actually happened.
template <class E, class Fn>
std::string thrown_code(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const E& e) {
    return e.code();
  } catch (const std::exception& e) {
    return std::string("<wrong type: ") + e.what() + ">";
  }
  return "<no throw>";
}

inline std::string graphs_dir() {
  if (const char* env = std::getenv("RIBAMP_GRAPHS_DIR")) return env;
#ifdef RIBAMP_GRAPHS_DIR
  return RIBAMP_GRAPHS_DIR;
#else
  return "graphs";
#endif
}

struct Loaded {
  ribamp::RibbonGraph graph;
  ribamp::FaceStructure faces;
  ribamp::IndexAssignment assignment;
};

inline Loaded load(const std::string& stem) {
  Loaded out;
  out.graph = ribamp::load_graph_file(graphs_dir() + "/" + stem + ".rib");
  out.faces = ribamp::trace_faces(out.graph);
  out.assignment = ribamp::index_assignment(out.graph, out.faces);
  return out;
}

// the 22 two-loop two-point diagrams of maximal divergence order
inline const std::vector<std::string>& maximal_names() {
  static const std::vector<std::string> names = {
      "nested_double_tadpole",
      "tadpole_on_stem_in_loop",
      "hanging_bubble",
      "hanging_stem_tadpole",
      "nested_on_stem",
      "tadpole_stem_on_stem",
      "hanging_bubble_on_stem",
      "hanging_stem_tadpole_on_stem",
      "theta_chord",
      "bubble_chord_top",
      "theta_chord_on_stem",
      "bubble_chord_top_on_stem",
      "lens_left",
      "lens_on_mid",
      "bubble_on_top_edge",
      "tadpole_on_top_edge",
      "lens_right",
      "lens_on_mid_right",
      "bubble_on_top_edge_right",
      "tadpole_on_top_edge_right",
      "triple_banana",
      "banana_vertical_chord",
  };
  return names;
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> all = {
        "tadpole_2pt",       "tadpole_1pt",     "chain_two_bubbles",
        "crossed_theta",     "double_edge_3pt", "triangle_ring_3pt",
    };
    for (const std::string& m : maximal_names()) all.push_back(m);
    return all;
  }();
  return names;
}

}  // namespace testutil

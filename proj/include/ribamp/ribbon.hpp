#pragma once

// Embedded (ribbon) graphs as combinatorial maps.
//
// A graph is described by counterclockwise rotations (the cyclic dart order
// at each vertex), an involution pairing darts into internal edges, and
// numbered external legs.  Faces are the orbits of the face permutation
//   phi(h) = sigma(theta(h))          for internal darts,
//   phi(h) = sigma(h), via a marker   for external darts,
// where the marker of leg k is inserted into the orbit immediately after
// leg k's dart.  A face is broken when its orbit carries at least one
// marker.  Each broken-face segment between consecutive markers carries the
// leg number of the marker opening it; unbroken faces are numbered n+1..n+U
// in order of their smallest dart.  These segment labels are the index
// numbers that feed eigenvalues into the amplitude rules.

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ribamp/errors.hpp"

namespace ribamp {

struct GraphDescription {
  std::string name;
  // vertex name, darts in counterclockwise cyclic order
  std::vector<std::pair<std::string, std::vector<std::string>>> vertices;
  std::vector<std::pair<std::string, std::string>> edge_pairs;
  std::vector<std::pair<int, std::string>> legs;  // (leg number, dart name)
};

// Validated graph with dense dart ids 0..dart_count-1, assigned in order of
// first appearance in the rotations (so numbering is reproducible).
struct RibbonGraph {
  std::string name;
  std::vector<std::string> vertex_names;
  std::vector<std::string> dart_names;
  std::vector<std::vector<int>> rotations;  // vertex -> darts, ccw cyclic
  std::vector<std::array<int, 2>> edges;    // edge -> its two darts
  std::vector<int> legs;                    // leg number - 1 -> dart

  std::vector<int> vertex_of;  // dart -> vertex
  std::vector<int> pos_of;     // dart -> position within its rotation
  std::vector<int> theta;      // dart -> partner dart, -1 for external
  std::vector<int> edge_of;    // dart -> edge index, -1 for external
  std::vector<int> leg_of;     // dart -> leg number, 0 for internal

  int vertex_count() const { return static_cast<int>(rotations.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int leg_count() const { return static_cast<int>(legs.size()); }
  int dart_count() const { return static_cast<int>(dart_names.size()); }
  int degree(int v) const { return static_cast<int>(rotations[v].size()); }

  // next dart counterclockwise around the same vertex
  int sigma(int dart) const {
    const std::vector<int>& rot = rotations[vertex_of[dart]];
    std::size_t p = static_cast<std::size_t>(pos_of[dart]) + 1;
    return rot[p == rot.size() ? 0 : p];
  }
};

// Validates and indexes a description.  Throws ParseError with tags
// DuplicateDart, SelfPairedDart, UnpairedDart, UnknownDart, LegNumberGap,
// DuplicateVertex.
RibbonGraph build_graph(const GraphDescription& in);

struct FaceItem {
  bool is_marker;  // true: marker of an external leg
  int value;       // dart id, or leg number for a marker
};

struct Face {
  std::vector<FaceItem> items;  // one phi-orbit, starting at its minimal dart
  bool broken = false;
  int label = 0;  // unbroken faces: n+1..n+U; broken faces: 0 (per-segment)
  std::vector<int> dart_list() const;
};

struct FaceStructure {
  std::vector<Face> faces;   // ordered by smallest dart id
  std::vector<int> face_of;  // dart -> face index
  std::vector<int> label_of; // dart -> segment index number (1..n+U)
  int broken_count = 0;      // B
  int unbroken_count = 0;    // U
  int leg_count = 0;         // n
  // labels of artificially broken faces -> their fixed spectrum index
  std::map<int, int> fixed_label_index;

  // labels of the faces that are still unbroken, ascending
  std::vector<int> unbroken_labels() const;
  // face index carrying the given unbroken-face label (> leg_count)
  int face_of_label(int label) const;
};

FaceStructure trace_faces(const RibbonGraph& g);

struct IndexAssignment {
  std::vector<std::vector<int>> alpha;   // per vertex, aligned with rotation
  std::vector<std::array<int, 2>> beta;  // per edge, aligned with edge darts
};

IndexAssignment index_assignment(const RibbonGraph& g, const FaceStructure& faces);

struct GraphProfile {
  int vertices = 0;
  int edges = 0;
  int legs = 0;
  int components = 0;
  int loops = 0;   // L = E - V + C
  int faces = 0;   // F = B + U
  int broken = 0;
  int unbroken = 0;
  int genus = 0;   // summed over components
  std::vector<int> genus_per_component;
  int fully_internal_edges = 0;     // edges bordered only by unbroken faces
  int fully_internal_vertices = 0;  // vertices bordered only by unbroken faces
  int min_degree = 0;
  int max_degree = 0;
};

// Counts are with respect to the face structure passed in, so profiles of
// artificially broken structures report the reduced U and fully-internal
// counts.  Throws MathError("NonOrientableInconsistency") if any component's
// genus comes out negative or half-integer.
GraphProfile profile(const RibbonGraph& g, const FaceStructure& faces);

// Reclassify the unbroken faces with labels in b as broken, fixing their
// index to gamma(label).  Segment labels and the index assignment are
// unchanged; U drops by |b| and downstream amplitude/profile treat the fixed
// labels like external indices.  Throws MathError("NotUnbrokenFace") if a
// label does not name a currently unbroken face, MathError("BadRange") if
// gamma's domain is not exactly b.
FaceStructure artificially_break(const FaceStructure& faces, const std::set<int>& b_labels,
                                 const std::map<int, int>& gamma);

}  // namespace ribamp

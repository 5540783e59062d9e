#pragma once

// Random connected ribbon graphs for property tests.  Degrees are kept at 3
// or above by default: several counting inequalities that hold for the
// physically relevant graphs (and that the tests assert) admit degenerate
// counterexamples at valence 1.

#include <random>

#include "ribamp/ribbon.hpp"

namespace ribamp {

struct RandomGraphOptions {
  int min_vertices = 2;
  int max_vertices = 6;
  int min_degree = 3;
  int max_degree = 7;
  int min_legs = 0;
  int max_legs = 3;
};

// Connected ribbon graph with uniformly paired darts and shuffled rotations.
// Deterministic for a given generator state.
RibbonGraph random_ribbon_graph(std::mt19937& rng, const RandomGraphOptions& opt = {});

// The same combinatorial map under renamed darts, reordered vertex/edge
// listings, and cyclically shifted rotations: every derived quantity
// (faces, profile, divergence orders) must be invariant under this.
GraphDescription relabel_description(const RibbonGraph& g, std::mt19937& rng);

}  // namespace ribamp

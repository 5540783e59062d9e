#include <doctest.h>

#include <array>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ribamp/powercount.hpp"
#include "ribamp/ribbon.hpp"

using namespace ribamp;
using testutil::load;

TEST_CASE("every corpus graph satisfies the global identities") {
  for (const std::string& stem : testutil::corpus_names()) {
    CAPTURE(stem);
    testutil::Loaded lg = load(stem);
    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(pr.components == 1);
    CHECK(pr.loops == pr.edges - pr.vertices + 1);
    CHECK(pr.faces == pr.broken + pr.unbroken);
    CHECK(2 - 2 * pr.genus == pr.vertices - pr.edges + pr.faces);
    CHECK(pr.fully_internal_edges >= pr.fully_internal_vertices);
    CHECK(pr.genus >= 0);

    // index assignment is aligned with rotations and edges
    REQUIRE(lg.assignment.alpha.size() == lg.graph.rotations.size());
    for (std::size_t v = 0; v < lg.assignment.alpha.size(); ++v)
      CHECK(lg.assignment.alpha[v].size() == lg.graph.rotations[v].size());
    REQUIRE(lg.assignment.beta.size() == lg.graph.edges.size());
    for (std::size_t e = 0; e < lg.assignment.beta.size(); ++e) {
      CHECK(lg.assignment.beta[e][0] == lg.faces.label_of[lg.graph.edges[e][0]]);
      CHECK(lg.assignment.beta[e][1] == lg.faces.label_of[lg.graph.edges[e][1]]);
    }
  }
}

TEST_CASE("profiles of the non-maximal corpus graphs") {
  struct Row {
    const char* stem;
    int v, e, n, loops, broken, unbroken, genus, efi, vfi;
  };
  const Row rows[] = {
      {"tadpole_2pt", 1, 1, 2, 1, 1, 1, 0, 0, 0},
      {"tadpole_1pt", 1, 1, 1, 1, 1, 1, 0, 0, 0},
      {"chain_two_bubbles", 3, 4, 2, 2, 1, 2, 0, 0, 0},
      {"crossed_theta", 2, 4, 2, 3, 1, 1, 1, 2, 0},
      {"double_edge_3pt", 2, 2, 3, 1, 1, 1, 0, 0, 0},
      {"triangle_ring_3pt", 3, 6, 3, 4, 1, 4, 0, 3, 0},
  };
  for (const Row& r : rows) {
    CAPTURE(r.stem);
    testutil::Loaded lg = load(r.stem);
    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(pr.vertices == r.v);
    CHECK(pr.edges == r.e);
    CHECK(pr.legs == r.n);
    CHECK(pr.loops == r.loops);
    CHECK(pr.broken == r.broken);
    CHECK(pr.unbroken == r.unbroken);
    CHECK(pr.genus == r.genus);
    CHECK(pr.fully_internal_edges == r.efi);
    CHECK(pr.fully_internal_vertices == r.vfi);
  }
}

TEST_CASE("the two-loop family realizes the maximal divergence pattern") {
  for (const std::string& stem : testutil::maximal_names()) {
    CAPTURE(stem);
    testutil::Loaded lg = load(stem);
    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(pr.legs == 2);
    CHECK(pr.loops == 2);
    CHECK(pr.broken == 1);
    CHECK(pr.unbroken == 2);  // U = L
    CHECK(pr.genus == 0);
    CHECK(pr.fully_internal_edges - pr.fully_internal_vertices == 1);
    CHECK(lg.faces.unbroken_labels() == std::vector<int>{3, 4});

    for (int p : {2, 4}) {
      for (int d : {1, 2}) {
        OmegaReport om = omega(pr, p, d);
        CHECK(om.omega == 2.0 + static_cast<double>(p) / d);
        CHECK(om.omega == max_omega(2, 2, p, d));
        MaximalityReport mr = classify_maximal(pr, p, d);
        CHECK(mr.is_maximal);
        CHECK(mr.genus_zero);
        CHECK(mr.unbroken_equals_loops);
        CHECK(mr.omega_value == mr.max_value);
      }
    }
  }
}

TEST_CASE("near-miss graphs are recognized as non-maximal") {
  {
    testutil::Loaded lg = load("chain_two_bubbles");
    GraphProfile pr = profile(lg.graph, lg.faces);
    OmegaReport om = omega(pr, 2.0, 1);
    CHECK(om.omega == 2.0);  // U = L but no fully-internal surplus
    MaximalityReport mr = classify_maximal(pr, 2.0, 1);
    CHECK(!mr.is_maximal);
    CHECK(mr.unbroken_equals_loops);
    CHECK(mr.genus_zero);
    CHECK(!mr.reasons.empty());
  }
  {
    testutil::Loaded lg = load("crossed_theta");
    GraphProfile pr = profile(lg.graph, lg.faces);
    MaximalityReport mr = classify_maximal(pr, 2.0, 1);
    CHECK(!mr.is_maximal);
    CHECK(!mr.genus_zero);
    CHECK(!mr.unbroken_equals_loops);  // U = 1 < L = 3
  }
  {
    testutil::Loaded lg = load("tadpole_2pt");
    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(omega(pr, 2.0, 1).omega == 1.0);
    CHECK(max_omega(2, 1, 2.0, 1) == 1.0);
    // one loop: the tadpole itself is the maximal one-loop correction
    CHECK(classify_maximal(pr, 2.0, 1).is_maximal);
  }
}

TEST_CASE("frozen index assignments") {
  {
    testutil::Loaded lg = load("nested_double_tadpole");
    REQUIRE(lg.assignment.alpha.size() == 1);
    CHECK(lg.assignment.alpha[0] == std::vector<int>{2, 1, 3, 4, 3, 1});
    REQUIRE(lg.assignment.beta.size() == 2);
    CHECK(lg.assignment.beta[0] == std::array<int, 2>{1, 3});
    CHECK(lg.assignment.beta[1] == std::array<int, 2>{3, 4});
  }
  {
    testutil::Loaded lg = load("crossed_theta");
    REQUIRE(lg.assignment.alpha.size() == 2);
    CHECK(lg.assignment.alpha[0] == std::vector<int>{2, 1, 3, 3, 3});
    CHECK(lg.assignment.alpha[1] == std::vector<int>{1, 2, 3, 3, 3});
    REQUIRE(lg.assignment.beta.size() == 4);
    CHECK(lg.assignment.beta[0] == std::array<int, 2>{3, 2});
    CHECK(lg.assignment.beta[1] == std::array<int, 2>{1, 3});
    CHECK(lg.assignment.beta[2] == std::array<int, 2>{3, 3});
    CHECK(lg.assignment.beta[3] == std::array<int, 2>{3, 3});
  }
  {
    testutil::Loaded lg = load("double_edge_3pt");
    CHECK(lg.assignment.alpha[0] == std::vector<int>{4, 3, 1, 2});
    CHECK(lg.assignment.alpha[1] == std::vector<int>{2, 3, 4});
    CHECK(lg.assignment.beta[0] == std::array<int, 2>{4, 3});
    CHECK(lg.assignment.beta[1] == std::array<int, 2>{2, 4});
  }
  {
    testutil::Loaded lg = load("triple_banana");
    CHECK(lg.assignment.alpha[0] == std::vector<int>{3, 4, 2, 1});
    CHECK(lg.assignment.alpha[1] == std::vector<int>{1, 2, 4, 3});
    CHECK(lg.assignment.beta[0] == std::array<int, 2>{4, 2});
    CHECK(lg.assignment.beta[1] == std::array<int, 2>{3, 4});
    CHECK(lg.assignment.beta[2] == std::array<int, 2>{1, 3});
  }
  {
    testutil::Loaded lg = load("triangle_ring_3pt");
    REQUIRE(lg.assignment.alpha.size() == 3);
    CHECK(lg.assignment.alpha[0] == std::vector<int>{4, 5, 2, 1, 6});
    CHECK(lg.assignment.alpha[1] == std::vector<int>{3, 2, 5, 4, 7});
    CHECK(lg.assignment.alpha[2] == std::vector<int>{3, 7, 4, 6, 1});
    REQUIRE(lg.assignment.beta.size() == 6);
    CHECK(lg.assignment.beta[0] == std::array<int, 2>{5, 2});
    CHECK(lg.assignment.beta[1] == std::array<int, 2>{1, 6});
    CHECK(lg.assignment.beta[2] == std::array<int, 2>{7, 3});
    CHECK(lg.assignment.beta[3] == std::array<int, 2>{4, 5});
    CHECK(lg.assignment.beta[4] == std::array<int, 2>{6, 4});
    CHECK(lg.assignment.beta[5] == std::array<int, 2>{4, 7});
    CHECK(lg.faces.unbroken_labels() == std::vector<int>{4, 5, 6, 7});
  }
}

TEST_CASE("vertex-to-edge injection verifies on the whole corpus") {
  for (const std::string& stem : testutil::corpus_names()) {
    CAPTURE(stem);
    testutil::Loaded lg = load(stem);
    std::vector<int> order = lg.faces.unbroken_labels();

    std::map<int, int> gam = gamma_injection(lg.graph, lg.faces, order);
    CHECK(gamma_check(lg.graph, lg.faces, order, gam) == "");

    std::vector<int> rev(order.rbegin(), order.rend());
    std::map<int, int> gam2 = gamma_injection(lg.graph, lg.faces, rev);
    CHECK(gamma_check(lg.graph, lg.faces, rev, gam2) == "");

    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(static_cast<int>(gam.size()) == pr.fully_internal_vertices);
  }

  // a graph with a fully internal vertex exercises the nontrivial case
  testutil::Loaded lg = load("tadpole_on_stem_in_loop");
  GraphProfile pr = profile(lg.graph, lg.faces);
  CHECK(pr.fully_internal_vertices == 1);
  CHECK(pr.fully_internal_edges == 2);
  std::map<int, int> gam = gamma_injection(lg.graph, lg.faces, lg.faces.unbroken_labels());
  CHECK(gam.size() == 1);
}

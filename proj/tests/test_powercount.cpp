#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ribamp/errors.hpp"
#include "ribamp/powercount.hpp"
#include "ribamp/randgraph.hpp"
#include "ribamp/ribbon.hpp"

using namespace ribamp;
using testutil::load;

TEST_CASE("divergence order on frozen graphs") {
  {
    testutil::Loaded lg = load("tadpole_2pt");
    GraphProfile pr = profile(lg.graph, lg.faces);
    OmegaReport om = omega(pr, 2.0, 1);
    CHECK(om.omega == 1.0);
    CHECK(om.unbroken == 1);
    CHECK(om.fully_internal_edges == 0);
    CHECK(om.fully_internal_vertices == 0);
    CHECK(!om.valence_warning);
    CHECK(omega(pr, 2.0, 2).omega == 1.0);
  }
  {
    testutil::Loaded lg = load("nested_double_tadpole");
    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(omega(pr, 2.0, 1).omega == 4.0);
    CHECK(omega(pr, 2.0, 2).omega == 3.0);
    CHECK(omega(pr, 4.0, 2).omega == 4.0);
  }
  {
    testutil::Loaded lg = load("crossed_theta");
    GraphProfile pr = profile(lg.graph, lg.faces);
    CHECK(omega(pr, 2.0, 1).omega == 5.0);  // 1 + (p/d)(2 - 0)
  }
  CHECK_THROWS_AS((void)omega(GraphProfile{}, 2.0, 0), MathError);
}

TEST_CASE("maximal order across leg and loop counts") {
  CHECK(max_omega(2, 2, 2.0, 1) == 4.0);
  CHECK(max_omega(2, 1, 2.0, 1) == 1.0);
  CHECK(max_omega(4, 2, 2.0, 1) == 4.0);  // leg count does not enter
  CHECK(max_omega(2, 2, 2.0, 2) == 3.0);
  CHECK(max_omega(2, 3, 2.0, 1) == 7.0);
  CHECK(max_omega(1, 1, 0.0, 1) == 1.0);
  CHECK(testutil::thrown_code<MathError>([] { (void)max_omega(0, 2, 2.0, 1); }) ==
        "BadRange");
  CHECK(testutil::thrown_code<MathError>([] { (void)max_omega(2, 0, 2.0, 1); }) ==
        "BadRange");
  CHECK(testutil::thrown_code<MathError>([] { (void)max_omega(2, 2, -1.0, 1); }) ==
        "BadRange");
}

TEST_CASE("degree-two vertices trigger the valence warning") {
  GraphDescription d;
  d.name = "circle";
  d.vertices = {{"v", {"a1", "a2"}}};
  d.edge_pairs = {{"a1", "a2"}};
  RibbonGraph g = build_graph(d);
  FaceStructure fs = trace_faces(g);
  OmegaReport om = omega(profile(g, fs), 2.0, 1);
  CHECK(om.valence_warning);
}

TEST_CASE("singular-mode order of the one-loop propagator correction") {
  testutil::Loaded lg = load("tadpole_2pt");

  // no singular external: the scan can only lower the order below omega at
  // p >= ... every subset row but the empty one loses its face factor
  OmegaTildeReport plain = omega_tilde(lg.graph, lg.faces, 2.0, 2, {});
  CHECK(plain.omega_tilde == 1.0);
  CHECK(plain.argmax_subset.empty());
  REQUIRE(plain.table.size() == 2);  // subsets of {3}
  CHECK(plain.table[0].subset.empty());
  CHECK(plain.table[0].value == 1.0);
  CHECK(plain.table[0].U_b == 1);
  CHECK(plain.table[0].E_10 == 0);

  // singular eigenvalue on leg 1: the loop edge picks up the (p+1)/d boost
  OmegaTildeReport sing = omega_tilde(lg.graph, lg.faces, 2.0, 2, {1});
  CHECK(sing.omega_tilde == 2.5);
  CHECK(sing.argmax_subset.empty());
  for (const OmegaTildeRow& row : sing.table) {
    if (row.subset.empty()) {
      CHECK(row.E_10 == 1);
      CHECK(row.V_10 == 0);
      CHECK(row.value == 2.5);
    } else {
      REQUIRE(row.subset == std::vector<int>{3});
      CHECK(row.U_b == 0);
      CHECK(row.E_10 == 0);  // the loop edge now has two singular incidences
      CHECK(row.value == 0.0);
    }
  }

  CHECK(testutil::thrown_code<MathError>([&] {
          (void)omega_tilde(lg.graph, lg.faces, 2.0, 2, {7});
        }) == "BadRange");
}

TEST_CASE("singular-mode scan of the triangle ring") {
  testutil::Loaded lg = load("triangle_ring_3pt");

  struct Expect {
    int d;
    double value;
    std::vector<int> argmax;
  };
  // max of 4 + 3p/d (empty set) and 3 + 3(p+1)/d (triangle face broken)
  const Expect cases[] = {
      {1, 12.0, {4}},
      {2, 7.5, {4}},
      {4, 5.5, {}},
  };
  for (const Expect& ex : cases) {
    CAPTURE(ex.d);
    OmegaTildeReport rep = omega_tilde(lg.graph, lg.faces, 2.0, ex.d, {});
    CHECK(rep.omega_tilde == ex.value);
    CHECK(rep.argmax_subset == ex.argmax);
    REQUIRE(rep.table.size() == 16);  // all subsets of {4,5,6,7}

    const double p = 2.0, dd = ex.d;
    for (const OmegaTildeRow& row : rep.table) {
      if (row.subset.empty()) {
        CHECK(row.value == 4.0 + 3.0 * p / dd);
        CHECK(row.E_fi_b == 3);
      } else if (row.subset == std::vector<int>{4}) {
        CHECK(row.U_b == 3);
        CHECK(row.E_fi_b == 0);
        CHECK(row.E_10 == 3);  // the three chords touch the triangle face once
        CHECK(row.V_10 == 0);
        CHECK(row.value == 3.0 + 3.0 * (p + 1.0) / dd);
      } else if (row.subset == std::vector<int>{5}) {
        CHECK(row.E_fi_b == 2);
        CHECK(row.E_10 == 1);
        CHECK(row.value == 3.0 + 2.0 * p / dd + (p + 1.0) / dd);
      } else if (row.subset == std::vector<int>{4, 5}) {
        CHECK(row.E_fi_b == 0);
        CHECK(row.E_10 == 2);
        CHECK(row.value == 2.0 + 2.0 * (p + 1.0) / dd);
      }
      // every row ties out against the standalone counting routine
      std::set<int> b(row.subset.begin(), row.subset.end());
      TenCounts tc = count_ten(lg.graph, lg.faces, b, b);
      CHECK(tc.edges == row.E_10);
      CHECK(tc.vertices == row.V_10);
    }
  }
}

TEST_CASE("subset scan refuses oversized face sets") {
  GraphDescription d;
  d.name = "flower";
  std::vector<std::string> rot = {"L"};
  for (int i = 0; i < 21; ++i) {
    rot.push_back("a" + std::to_string(i));
    rot.push_back("b" + std::to_string(i));
    d.edge_pairs.push_back({"a" + std::to_string(i), "b" + std::to_string(i)});
  }
  d.vertices = {{"v", rot}};
  d.legs = {{1, "L"}};
  RibbonGraph g = build_graph(d);
  FaceStructure fs = trace_faces(g);
  REQUIRE(fs.unbroken_count == 21);
  CHECK(testutil::thrown_code<BudgetError>([&] {
          (void)omega_tilde(g, fs, 2.0, 1, {});
        }) == "SubsetBudgetExceeded");
}

TEST_CASE("count_ten agrees with the scan on every corpus graph") {
  for (const std::string& stem : testutil::corpus_names()) {
    CAPTURE(stem);
    testutil::Loaded lg = load(stem);
    if (lg.faces.unbroken_count > 6) continue;
    OmegaTildeReport rep = omega_tilde(lg.graph, lg.faces, 2.0, 1, {});
    // the empty-subset row reproduces omega exactly
    GraphProfile pr = profile(lg.graph, lg.faces);
    REQUIRE(!rep.table.empty());
    CHECK(rep.table[0].subset.empty());
    CHECK(rep.table[0].value == omega(pr, 2.0, 1).omega);
    CHECK(rep.omega_tilde >= omega(pr, 2.0, 1).omega - 1e-12);
    for (const OmegaTildeRow& row : rep.table) {
      std::set<int> b(row.subset.begin(), row.subset.end());
      TenCounts tc = count_ten(lg.graph, lg.faces, b, b);
      CHECK(tc.edges == row.E_10);
      CHECK(tc.vertices == row.V_10);
      CHECK(row.U_b == lg.faces.unbroken_count - static_cast<int>(row.subset.size()));
    }
  }
}

TEST_CASE("injection rejects bad total orders and tampered maps") {
  testutil::Loaded lg = load("nested_double_tadpole");
  CHECK(testutil::thrown_code<MathError>([&] {
          (void)gamma_injection(lg.graph, lg.faces, {3});
        }) == "BadRange");
  CHECK(testutil::thrown_code<MathError>([&] {
          (void)gamma_injection(lg.graph, lg.faces, {3, 3});
        }) == "BadRange");
  CHECK(testutil::thrown_code<MathError>([&] {
          (void)gamma_injection(lg.graph, lg.faces, {3, 4, 5});
        }) == "BadRange");

  // a nonempty assignment, manually corrupted, fails the re-verification
  testutil::Loaded stem = load("tadpole_on_stem_in_loop");
  std::vector<int> order = stem.faces.unbroken_labels();
  std::map<int, int> gam = gamma_injection(stem.graph, stem.faces, order);
  REQUIRE(gam.size() == 1);
  std::map<int, int> bad = gam;
  bad[gam.begin()->first] = gam.begin()->second + 999;  // not an edge id it may use
  CHECK(gamma_check(stem.graph, stem.faces, order, bad) != "");
  std::map<int, int> extra = gam;
  extra[99] = 0;  // defined off the fully internal vertex set
  CHECK(gamma_check(stem.graph, stem.faces, order, extra) != "");
  CHECK(gamma_check(stem.graph, stem.faces, order, {}) != "");  // missing vertex
}

TEST_CASE("injection verifies on random graphs under random orders") {
  std::mt19937 rng(271828);
  RandomGraphOptions opt;
  for (int trial = 0; trial < 200; ++trial) {
    RibbonGraph g = random_ribbon_graph(rng, opt);
    FaceStructure fs = trace_faces(g);
    std::vector<int> order = fs.unbroken_labels();
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      std::shuffle(order.begin(), order.end(), rng);
      std::map<int, int> gam = gamma_injection(g, fs, order);
      CAPTURE(trial);
      CAPTURE(shuffle);
      CHECK(gamma_check(g, fs, order, gam) == "");
    }
  }
}

TEST_CASE("naive per-face bookkeeping overshoots on the nested graph") {
  testutil::Loaded nested = load("nested_double_tadpole");
  testutil::Loaded tad = load("tadpole_2pt");
  CHECK(naive_power_estimate(nested.graph, nested.faces, 2.0, 1) == 5.0);
  CHECK(naive_power_estimate(tad.graph, tad.faces, 2.0, 1) == 1.0);
  // the honest predictor puts the nested graph a full power lower
  GraphProfile pr = profile(nested.graph, nested.faces);
  CHECK(omega(pr, 2.0, 1).omega == 4.0);
}

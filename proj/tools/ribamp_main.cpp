// ribamp — ribbon graph amplitudes over truncated spectra.
//
// Commands:
//   analyze   face structure, profile, divergence orders of a graph
//   eval      amplitude at a single cutoff N
//   sweep     amplitudes over a cutoff list, with a log-log slope fit
//   verify    sweep + compare the fitted slope against the predicted order
//   selftest  built-in identity and property checks
//
// JSON reports go to stdout ("schema": 1).  For sweep/verify, --out writes
// the plot-ready CSV (N, |A|, local slope); for analyze/eval, --out redirects
// the JSON to a file.  Exit codes: 0 ok / verdict PASS, 1 verdict FAIL or
// internal error, 2 parse error, 3 math domain error, 4 budget exceeded.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ribamp/amplitude.hpp"
#include "ribamp/divdiff.hpp"
#include "ribamp/dsl.hpp"
#include "ribamp/powercount.hpp"
#include "ribamp/randgraph.hpp"
#include "ribamp/scaling.hpp"

using nlohmann::json;
using namespace ribamp;

namespace {

struct Options {
  std::string command;
  std::string graph_path;
  std::string family = "regularized_power";
  double p = 2.0;
  int d = 1;
  double c = 1.0;
  double epsilon = 0.0;
  std::vector<int> ext;
  std::vector<int> singular;
  int N = 0;
  std::vector<int> N_list;
  int iR = 1;
  std::string backend;  // default depends on the command
  double tol = -1.0;    // default depends on the graph
  int threads = 0;
  std::string out;
};

Backend parse_backend(const std::string& name, Backend fallback) {
  if (name.empty()) return fallback;
  if (name == "float64" || name == "double") return Backend::Float64;
  if (name == "dd" || name == "double-double" || name == "doubledouble")
    return Backend::DoubleDoubleBackend;
  if (name == "exact" || name == "rational") return Backend::ExactRational;
  throw ParseError("UnknownBackend", "backend '" + name +
                                         "' (expected float64, dd, or exact)");
}

SmoothFamily make_family(const Options& opt) {
  SmoothFamily fam = SmoothFamily::inverse_power(2);
  if (opt.family == "inverse_power" || opt.family == "inverse") {
    const int ip = static_cast<int>(std::lround(opt.p));
    if (std::abs(opt.p - ip) > 0 || ip <= 0 || ip % 2 != 0)
      throw ParseError("BadFlagValue", "inverse_power needs an even positive integer p");
    fam = SmoothFamily::inverse_power(ip);
  } else if (opt.family == "regularized_power" || opt.family == "regularized") {
    if (opt.p <= 0) throw ParseError("BadFlagValue", "regularized_power needs p > 0");
    fam = SmoothFamily::regularized_power(opt.p);
  } else {
    throw ParseError("UnknownFamily", "family '" + opt.family +
                                          "' (expected inverse_power or regularized_power)");
  }
  if (opt.epsilon != 0.0) fam = fam.shifted(opt.epsilon);
  return fam;
}

Spectrum make_spectrum(const Options& opt) {
  Spectrum spec;
  spec.model = SpectrumModel::Power;
  spec.d = opt.d;
  spec.c = opt.c;
  spec.epsilon = opt.epsilon;
  if (!opt.singular.empty()) {
    spec.singular_mode = true;
    spec.singular_index = 0;
  }
  return spec;
}

// external indices per leg: --ext values, defaulting to 1, with singular
// positions pinned to the singular index 0
std::vector<int> make_externals(const Options& opt, const RibbonGraph& g) {
  std::vector<int> ext = opt.ext;
  if (ext.empty()) ext.assign(g.leg_count(), 1);
  if (static_cast<int>(ext.size()) != g.leg_count())
    throw MathError("BadRange", "graph has " + std::to_string(g.leg_count()) +
                                    " legs but --ext lists " +
                                    std::to_string(ext.size()) + " indices");
  for (int pos : opt.singular) {
    if (pos < 1 || pos > g.leg_count())
      throw MathError("BadRange", "singular position " + std::to_string(pos) +
                                      " is not a leg");
    ext[pos - 1] = 0;
  }
  return ext;
}

void write_output(const Options& opt, const json& doc) {
  if (opt.command == "analyze" || opt.command == "eval") {
    if (!opt.out.empty()) {
      std::ofstream f(opt.out);
      if (!f) throw ParseError("FileNotFound", "cannot write " + opt.out);
      f << doc.dump(2) << "\n";
      return;
    }
  }
  std::cout << doc.dump(2) << "\n";
}

void write_csv(const Options& opt, const SweepSeries& series) {
  if (opt.out.empty()) return;
  std::ofstream f(opt.out);
  if (!f) throw ParseError("FileNotFound", "cannot write " + opt.out);
  f << sweep_csv(series);
}

json profile_json(const GraphProfile& pr) {
  return json{{"vertices", pr.vertices},
              {"edges", pr.edges},
              {"legs", pr.legs},
              {"components", pr.components},
              {"loops", pr.loops},
              {"faces", pr.faces},
              {"broken_faces", pr.broken},
              {"unbroken_faces", pr.unbroken},
              {"genus", pr.genus},
              {"genus_per_component", pr.genus_per_component},
              {"fully_internal_edges", pr.fully_internal_edges},
              {"fully_internal_vertices", pr.fully_internal_vertices},
              {"min_degree", pr.min_degree},
              {"max_degree", pr.max_degree}};
}

json tilde_json(const OmegaTildeReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.table)
    rows.push_back(json{{"subset", row.subset},
                        {"unbroken", row.U_b},
                        {"fully_internal_edges", row.E_fi_b},
                        {"fully_internal_vertices", row.V_fi_b},
                        {"single_zero_edges", row.E_10},
                        {"single_zero_vertices", row.V_10},
                        {"value", row.value}});
  return json{{"omega_tilde", rep.omega_tilde},
              {"argmax_subset", rep.argmax_subset},
              {"table", rows}};
}

json fit_json(const SlopeFit& fit) {
  return json{{"global_slope", fit.global_slope},
              {"stderr", fit.stderr_slope},
              {"local_slopes", fit.local_slopes},
              {"extrapolated_slope", fit.extrapolated_slope},
              {"window", fit.window},
              {"monotone_tail", fit.monotone_tail}};
}

json points_json(const SweepSeries& series) {
  json pts = json::array();
  for (const auto& p : series.points) {
    json j{{"N", p.N},
           {"ok", p.ok},
           {"abs_amplitude", p.abs_amplitude},
           {"value", p.value},
           {"term_count", p.term_count},
           {"wall_time", p.wall_time}};
    if (!p.ok) j["error"] = p.error;
    pts.push_back(std::move(j));
  }
  return pts;
}

int cmd_analyze(const Options& opt) {
  const RibbonGraph g = load_graph_file(opt.graph_path);
  const FaceStructure faces = trace_faces(g);
  const GraphProfile pr = profile(g, faces);
  const OmegaReport om = omega(pr, opt.p, opt.d);

  json doc{{"schema", 1},
           {"command", "analyze"},
           {"graph", g.name},
           {"profile", profile_json(pr)},
           {"p", opt.p},
           {"d", opt.d},
           {"omega", om.omega},
           {"valence_warning", om.valence_warning},
           {"naive_estimate", naive_power_estimate(g, faces, opt.p, opt.d)}};
  if (pr.components == 1 && pr.legs >= 1 && pr.loops >= 1) {
    const MaximalityReport mr = classify_maximal(pr, opt.p, opt.d);
    doc["max_omega"] = mr.max_value;
    doc["is_maximal"] = mr.is_maximal;
    doc["maximality"] = mr.reasons;
  }
  if (!opt.singular.empty()) {
    const std::set<int> positions(opt.singular.begin(), opt.singular.end());
    doc["singular_positions"] = opt.singular;
    doc["tilde"] = tilde_json(omega_tilde(g, faces, opt.p, opt.d, positions));
    doc["omega_tilde"] = doc["tilde"]["omega_tilde"];
  }
  write_output(opt, doc);
  return 0;
}

template <class S>
void eval_into(const Options& opt, const RibbonGraph& g, const FaceStructure& faces,
               const IndexAssignment& ia, json& doc) {
  DivDiffEngine<S> engine(make_family(opt), make_spectrum(opt));
  AmplitudeRequest req;
  req.graph = &g;
  req.faces = &faces;
  req.assignment = &ia;
  req.external_indices = make_externals(opt, g);
  req.N = opt.N;
  req.i_R = opt.iR;
  req.threads = opt.threads;
  req.summation = opt.threads == 1 ? SummationMode::SequentialCompensated
                                   : SummationMode::ParallelDeterministic;
  const AmplitudeResult<S> r = evaluate(engine, req);
  doc["value"] = scalar_ops<S>::to_double(r.value);
  if constexpr (scalar_ops<S>::exact) {
    std::ostringstream os;
    os << r.value;
    doc["value_exact"] = os.str();
  }
  doc["term_count"] = r.term_count;
  doc["memo_hits"] = r.memo_hits;
  doc["memo_misses"] = r.memo_misses;
  doc["wall_time"] = r.wall_time;
}

int cmd_eval(const Options& opt) {
  if (opt.N < 1) throw ParseError("BadFlagValue", "eval needs --N >= 1");
  const RibbonGraph g = load_graph_file(opt.graph_path);
  const FaceStructure faces = trace_faces(g);
  const IndexAssignment ia = index_assignment(g, faces);

  json doc{{"schema", 1}, {"command", "eval"}, {"graph", g.name},
           {"N", opt.N},   {"i_R", opt.iR},    {"external_indices", make_externals(opt, g)},
           {"family", make_family(opt).describe()}};
  switch (parse_backend(opt.backend, Backend::DoubleDoubleBackend)) {
    case Backend::Float64:
      doc["backend"] = "float64";
      eval_into<double>(opt, g, faces, ia, doc);
      break;
    case Backend::DoubleDoubleBackend:
      doc["backend"] = "dd";
      eval_into<DoubleDouble>(opt, g, faces, ia, doc);
      break;
    case Backend::ExactRational:
      doc["backend"] = "exact";
      eval_into<Rational>(opt, g, faces, ia, doc);
      break;
  }
  write_output(opt, doc);
  return 0;
}

SweepRequest make_sweep_request(const Options& opt, const RibbonGraph& g,
                                const FaceStructure& faces, const IndexAssignment& ia) {
  SweepRequest req;
  req.graph = &g;
  req.faces = &faces;
  req.assignment = &ia;
  req.family = make_family(opt);
  req.spectrum = make_spectrum(opt);
  req.external_indices = make_externals(opt, g);
  req.backend = parse_backend(opt.backend, Backend::Float64);
  req.summation = opt.threads == 1 ? SummationMode::SequentialCompensated
                                   : SummationMode::ParallelDeterministic;
  req.threads = opt.threads;
  req.descriptor = g.name + " " + req.family.describe();
  return req;
}

std::vector<int> require_n_list(const Options& opt) {
  std::vector<int> ns = opt.N_list;
  if (ns.empty() && opt.N > 0)
    for (int n = std::max(2, opt.N / 16); n <= opt.N; n *= 2) ns.push_back(n);
  if (ns.empty())
    throw ParseError("BadFlagValue", "need --N-list n1,n2,... (or --N for a default grid)");
  return ns;
}

int cmd_sweep(const Options& opt) {
  const RibbonGraph g = load_graph_file(opt.graph_path);
  const FaceStructure faces = trace_faces(g);
  const IndexAssignment ia = index_assignment(g, faces);
  const SweepRequest req = make_sweep_request(opt, g, faces, ia);
  const SweepSeries series = sweep(req, require_n_list(opt));

  json doc{{"schema", 1},
           {"command", "sweep"},
           {"graph", g.name},
           {"family", req.family.describe()},
           {"points", points_json(series)},
           {"memo",
            {{"hits", series.memo_hits},
             {"misses", series.memo_misses},
             {"hit_rate", series.hit_rate()}}}};
  try {
    doc["fit"] = fit_json(fit_slope(series));
  } catch (const Error& e) {
    doc["fit_error"] = e.code() + ": " + e.what();
  }
  write_csv(opt, series);
  write_output(opt, doc);
  return 0;
}

int cmd_verify(const Options& opt) {
  const RibbonGraph g = load_graph_file(opt.graph_path);
  const FaceStructure faces = trace_faces(g);
  const IndexAssignment ia = index_assignment(g, faces);
  const SweepRequest req = make_sweep_request(opt, g, faces, ia);

  double tol = opt.tol;
  if (tol <= 0) tol = faces.unbroken_count <= 1 ? 0.15 : 0.25;
  const std::set<int> positions(opt.singular.begin(), opt.singular.end());
  const VerifyReport rep = verify(req, require_n_list(opt), tol, positions);

  json doc{{"schema", 1},
           {"command", "verify"},
           {"graph", g.name},
           {"family", req.family.describe()},
           {"predicted", rep.predicted},
           {"comparison", rep.one_sided ? "upper-bound" : "two-sided"},
           {"tolerance", rep.tolerance},
           {"extrapolated_slope", rep.fit.extrapolated_slope},
           {"verdict", rep.pass ? "PASS" : "FAIL"},
           {"pass", rep.pass},
           {"sign_constant", rep.sign_constant},
           {"detail", rep.detail},
           {"omega", rep.omega_report.omega},
           {"fit", fit_json(rep.fit)},
           {"points", points_json(rep.series)},
           {"memo",
            {{"hits", rep.series.memo_hits},
             {"misses", rep.series.memo_misses},
             {"hit_rate", rep.series.hit_rate()}}}};
  if (rep.has_tilde) {
    doc["tilde"] = tilde_json(rep.tilde_report);
    doc["omega_tilde"] = rep.tilde_report.omega_tilde;
  }
  if (!opt.singular.empty()) doc["singular_positions"] = opt.singular;
  write_csv(opt, rep.series);
  write_output(opt, doc);
  return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// selftest

const char* kTadpole = R"(graph tadpole_2pt
vertex v: d0 d1 d2 d3
edge d1 d2
ext 1 d0
ext 2 d3
)";

const char* kNested = R"(graph nested_double_tadpole
vertex v: d0 d1 d2 d3 d4 d5
edge d1 d4
edge d2 d3
ext 1 d0
ext 2 d5
)";

const char* kCrossed = R"(graph crossed_theta
vertex v1: L1 Bo1 B1 A1 T1
vertex v2: L2 T2 B2 A2 Bo2
edge T1 T2
edge Bo1 Bo2
edge A1 A2
edge B1 B2
ext 1 L1
ext 2 L2
)";

struct SelfTest {
  int passed = 0;
  int failed = 0;
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    if (ok) {
      ++passed;
      std::cout << "ok - " << name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL - " << name << (detail.empty() ? "" : ": " + detail) << "\n";
    }
  }
};

void selftest_hp_oracle(SelfTest& st) {
  std::mt19937 rng(7031);
  std::uniform_int_distribution<int> num(1, 9), den(1, 5), sign(0, 1);
  bool all_equal = true;
  std::string detail;
  for (int p : {2, 4}) {
    const SmoothFamily fam = SmoothFamily::inverse_power(p);
    for (int trial = 0; trial < 20 && all_equal; ++trial) {
      const int n = 1 + trial % 4;
      std::vector<Rational> xs;
      for (int i = 0; i < n; ++i) {
        Rational x(num(rng), den(rng));
        if (sign(rng)) x = -x;
        xs.push_back(x);
      }
      bool distinct = true;
      for (std::size_t i = 0; i < xs.size() && distinct; ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
          if (xs[i] == xs[j]) distinct = false;
      if (!distinct) continue;
      const Rational lhs = weighted_divdiff<Rational>(fam, 1, xs);
      const Rational rhs = Rational(p) * hp_oracle(p, xs);
      if (lhs != rhs) {
        all_equal = false;
        detail = "p = " + std::to_string(p) + ", trial " + std::to_string(trial);
      }
    }
  }
  st.check("weighted divided differences match the reciprocal-sum oracle exactly",
           all_equal, detail);
}

void selftest_weighted_identity(SelfTest& st) {
  for (const char* text : {kTadpole, kNested, kCrossed}) {
    const RibbonGraph g = parse_graph_dsl(text);
    const FaceStructure faces = trace_faces(g);
    const IndexAssignment ia = index_assignment(g, faces);
    DivDiffEngine<DoubleDouble> eng(SmoothFamily::inverse_power(2), Spectrum{});
    AmplitudeRequest req;
    req.graph = &g;
    req.faces = &faces;
    req.assignment = &ia;
    req.external_indices.assign(g.leg_count(), 1);
    req.N = 6;
    const double a = scalar_ops<DoubleDouble>::to_double(evaluate(eng, req).value);
    const double w = scalar_ops<DoubleDouble>::to_double(evaluate_weighted(eng, req).value);
    const double gap = std::abs(a - w) / std::max(1.0, std::abs(a));
    st.check("weighted and standard amplitudes agree on " + g.name, gap <= 1e-9,
             "relative gap " + std::to_string(gap));
  }
}

void selftest_sum_split(SelfTest& st) {
  for (const char* text : {kTadpole, kNested}) {
    const RibbonGraph g = parse_graph_dsl(text);
    const FaceStructure faces = trace_faces(g);
    const IndexAssignment ia = index_assignment(g, faces);
    DivDiffEngine<double> eng(SmoothFamily::inverse_power(2), Spectrum{});
    const auto split =
        sum_split_check(eng, g, faces, ia, std::vector<int>(g.leg_count(), 1), 8, 3);
    st.check("sum splitting reconstructs the amplitude on " + g.name,
             split.gap <= 1e-10, "relative gap " + std::to_string(split.gap));
  }
}

void selftest_gamma(SelfTest& st) {
  bool all_ok = true;
  std::string detail;
  auto try_graph = [&](const RibbonGraph& g) {
    const FaceStructure faces = trace_faces(g);
    std::vector<int> order = faces.unbroken_labels();
    for (int variant = 0; variant < 2 && all_ok; ++variant) {
      if (variant == 1) std::reverse(order.begin(), order.end());
      const auto gamma = gamma_injection(g, faces, order);
      const std::string err = gamma_check(g, faces, order, gamma);
      if (!err.empty()) {
        all_ok = false;
        detail = g.name + ": " + err;
      }
    }
  };
  for (const char* text : {kTadpole, kNested, kCrossed}) try_graph(parse_graph_dsl(text));
  std::mt19937 rng(40921);
  for (int i = 0; i < 30 && all_ok; ++i) {
    try {
      try_graph(random_ribbon_graph(rng));
    } catch (const Error& e) {
      all_ok = false;
      detail = std::string("random graph: ") + e.code() + ": " + e.what();
    }
  }
  st.check("vertex-to-edge injection properties hold", all_ok, detail);
}

int cmd_selftest(const Options&) {
  SelfTest st;
  selftest_hp_oracle(st);
  selftest_weighted_identity(st);
  selftest_sum_split(st);
  selftest_gamma(st);
  std::cout << st.passed << "/" << (st.passed + st.failed) << " checks passed\n";
  return st.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ribbon graph amplitudes over truncated spectra"};
  app.require_subcommand(1);
  Options opt;

  auto add_graph_flags = [&](CLI::App* sub) {
    sub->add_option("--graph", opt.graph_path, "graph DSL file")->required();
    sub->add_option("--p", opt.p, "decay exponent of the function family");
    sub->add_option("--d", opt.d, "spectral dimension");
  };
  auto add_family_flags = [&](CLI::App* sub) {
    sub->add_option("--family", opt.family,
                    "function family: inverse_power | regularized_power");
    sub->add_option("--c", opt.c, "spectrum scale: eigenvalues c * k^(1/d)");
    sub->add_option("--epsilon", opt.epsilon,
                    "translation applied to both family and spectrum");
    sub->add_option("--ext", opt.ext, "external spectrum indices i1,i2,...")
        ->delimiter(',');
    sub->add_option("--singular", opt.singular,
                    "leg positions pinned to the singular index 0")
        ->delimiter(',');
    sub->add_option("--backend", opt.backend, "float64 | dd | exact");
    sub->add_option("--threads", opt.threads, "worker threads (0 = auto, 1 = serial)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "profile and divergence orders");
  add_graph_flags(analyze);
  analyze->add_option("--singular", opt.singular,
                      "leg positions pinned to the singular index 0")
      ->delimiter(',');
  analyze->add_option("--out", opt.out, "write the JSON report here");

  CLI::App* eval = app.add_subcommand("eval", "amplitude at one cutoff");
  add_graph_flags(eval);
  add_family_flags(eval);
  eval->add_option("--N", opt.N, "cutoff")->required();
  eval->add_option("--iR", opt.iR, "restrict running indices to {iR..N}");
  eval->add_option("--out", opt.out, "write the JSON report here");

  CLI::App* sweepc = app.add_subcommand("sweep", "amplitudes over a cutoff grid");
  add_graph_flags(sweepc);
  add_family_flags(sweepc);
  sweepc->add_option("--N-list", opt.N_list, "cutoffs n1,n2,...")->delimiter(',');
  sweepc->add_option("--N", opt.N, "largest cutoff of a default doubling grid");
  sweepc->add_option("--out", opt.out, "write the CSV series here");

  CLI::App* verifyc =
      app.add_subcommand("verify", "compare measured slope with predicted order");
  add_graph_flags(verifyc);
  add_family_flags(verifyc);
  verifyc->add_option("--N-list", opt.N_list, "cutoffs n1,n2,...")->delimiter(',');
  verifyc->add_option("--N", opt.N, "largest cutoff of a default doubling grid");
  verifyc->add_option("--tol", opt.tol, "slope tolerance (default 0.15 / 0.25)");
  verifyc->add_option("--out", opt.out, "write the CSV series here");

  CLI::App* selftestc = app.add_subcommand("selftest", "built-in identity checks");
  (void)selftestc;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opt);
    if (eval->parsed()) return cmd_eval(opt);
    if (sweepc->parsed()) return cmd_sweep(opt);
    if (verifyc->parsed()) return cmd_verify(opt);
    return cmd_selftest(opt);
  } catch (const ParseError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 4;
  } catch (const MathError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

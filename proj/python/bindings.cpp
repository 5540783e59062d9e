// Python bindings for the ribbon-amplitude library.  The module exposes the
// high-level workflow — parse or load a graph, inspect its profile, predict
// divergence orders, evaluate amplitudes, and run a cutoff sweep — while the
// heavy lifting stays in the C++ core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ribamp/amplitude.hpp"
#include "ribamp/divdiff.hpp"
#include "ribamp/dsl.hpp"
#include "ribamp/errors.hpp"
#include "ribamp/powercount.hpp"
#include "ribamp/ribbon.hpp"
#include "ribamp/scaling.hpp"
#include "ribamp/spectra.hpp"

namespace py = pybind11;
using namespace ribamp;

namespace {

struct PyGraph {
  RibbonGraph graph;
  FaceStructure faces;
  IndexAssignment assignment;

  explicit PyGraph(RibbonGraph g)
      : graph(std::move(g)), faces(trace_faces(graph)),
        assignment(index_assignment(graph, faces)) {}
};

SmoothFamily make_family(const std::string& name, double p) {
  if (name == "inverse") return SmoothFamily::inverse_power(static_cast<int>(p));
  if (name == "regularized") return SmoothFamily::regularized_power(p);
  throw MathError("InvalidFamily", "unknown family '" + name + "'");
}

Spectrum make_spectrum(double d, double epsilon, bool singular) {
  Spectrum spec;
  spec.d = d;
  spec.epsilon = epsilon;
  spec.singular_mode = singular;
  return spec;
}

py::dict profile_dict(const GraphProfile& pr) {
  py::dict out;
  out["vertices"] = pr.vertices;
  out["edges"] = pr.edges;
  out["legs"] = pr.legs;
  out["components"] = pr.components;
  out["loops"] = pr.loops;
  out["faces"] = pr.faces;
  out["broken"] = pr.broken;
  out["unbroken"] = pr.unbroken;
  out["genus"] = pr.genus;
  out["fully_internal_edges"] = pr.fully_internal_edges;
  out["fully_internal_vertices"] = pr.fully_internal_vertices;
  out["min_degree"] = pr.min_degree;
  out["max_degree"] = pr.max_degree;
  return out;
}

py::dict omega_dict(const OmegaReport& rep) {
  py::dict out;
  out["omega"] = rep.omega;
  out["unbroken"] = rep.unbroken;
  out["fully_internal_edges"] = rep.fully_internal_edges;
  out["fully_internal_vertices"] = rep.fully_internal_vertices;
  out["p"] = rep.p;
  out["d"] = rep.d;
  out["valence_warning"] = rep.valence_warning;
  return out;
}

py::dict tilde_dict(const OmegaTildeReport& rep) {
  py::dict out;
  out["omega_tilde"] = rep.omega_tilde;
  out["argmax_subset"] = rep.argmax_subset;
  py::list rows;
  for (const OmegaTildeRow& row : rep.table) {
    py::dict r;
    r["subset"] = row.subset;
    r["U_b"] = row.U_b;
    r["E_fi_b"] = row.E_fi_b;
    r["V_fi_b"] = row.V_fi_b;
    r["E_10"] = row.E_10;
    r["V_10"] = row.V_10;
    r["value"] = row.value;
    rows.append(r);
  }
  out["table"] = rows;
  return out;
}

py::dict amplitude_of(const PyGraph& g, const std::vector<int>& external_indices, int N,
                      const std::string& family, double p, double d, double epsilon,
                      bool singular, int i_R, const std::map<int, int>& fixed_labels,
                      const std::string& backend) {
  AmplitudeRequest req;
  req.graph = &g.graph;
  req.faces = &g.faces;
  req.assignment = &g.assignment;
  req.external_indices = external_indices;
  req.N = N;
  req.i_R = i_R;
  req.fixed_labels = fixed_labels;

  const SmoothFamily fam = make_family(family, p);
  const Spectrum spec = make_spectrum(d, epsilon, singular);

  py::dict out;
  if (backend == "double" || backend == "float64") {
    DivDiffEngine<double> eng(fam, spec);
    const AmplitudeResult<double> r = evaluate(eng, req);
    out["value"] = r.value;
    out["term_count"] = r.term_count;
    out["wall_time"] = r.wall_time;
  } else if (backend == "dd" || backend == "double-double") {
    DivDiffEngine<DoubleDouble> eng(fam, spec);
    const AmplitudeResult<DoubleDouble> r = evaluate(eng, req);
    out["value"] = to_double(r.value);
    out["term_count"] = r.term_count;
    out["wall_time"] = r.wall_time;
  } else {
    throw MathError("InvalidFamily", "unknown backend '" + backend + "'");
  }
  out["N"] = N;
  return out;
}

py::dict verify_scaling(const PyGraph& g, const std::vector<int>& external_indices,
                        const std::vector<int>& N_list, const std::string& family,
                        double p, double d, double epsilon, bool singular,
                        double tolerance, const std::set<int>& singular_positions) {
  SweepRequest req;
  req.graph = &g.graph;
  req.faces = &g.faces;
  req.assignment = &g.assignment;
  req.family = make_family(family, p);
  req.spectrum = make_spectrum(d, epsilon, singular);
  req.external_indices = external_indices;

  const VerifyReport rep = verify(req, N_list, tolerance, singular_positions);
  py::dict out;
  out["pass"] = rep.pass;
  out["predicted"] = rep.predicted;
  out["one_sided"] = rep.one_sided;
  out["tolerance"] = rep.tolerance;
  out["sign_constant"] = rep.sign_constant;
  out["global_slope"] = rep.fit.global_slope;
  out["extrapolated_slope"] = rep.fit.extrapolated_slope;
  out["local_slopes"] = rep.fit.local_slopes;
  out["detail"] = rep.detail;
  out["csv"] = sweep_csv(rep.series);
  py::list points;
  for (const SweepPoint& pt : rep.series.points) {
    py::dict q;
    q["N"] = pt.N;
    q["value"] = pt.value;
    q["abs_amplitude"] = pt.abs_amplitude;
    q["term_count"] = pt.term_count;
    q["ok"] = pt.ok;
    points.append(q);
  }
  out["points"] = points;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ribamp, m) {
  m.doc() = "ribbon graph amplitudes over truncated spectra";

  static py::exception<Error> exc(m, "Error");
  py::register_exception_translator([](std::exception_ptr ep) {
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const Error& e) {
      exc(std::string(e.code() + ": " + e.what()).c_str());
    }
  });

  py::class_<PyGraph>(m, "Graph")
      .def_property_readonly("name", [](const PyGraph& g) { return g.graph.name; })
      .def("serialize", [](const PyGraph& g) { return serialize_graph_dsl(g.graph); })
      .def("profile",
           [](const PyGraph& g) { return profile_dict(profile(g.graph, g.faces)); })
      .def(
          "omega",
          [](const PyGraph& g, double p, int d) {
            return omega_dict(omega(profile(g.graph, g.faces), p, d));
          },
          py::arg("p"), py::arg("d"))
      .def(
          "omega_tilde",
          [](const PyGraph& g, double p, int d, const std::set<int>& singular_externals) {
            return tilde_dict(omega_tilde(g.graph, g.faces, p, d, singular_externals));
          },
          py::arg("p"), py::arg("d"), py::arg("singular_externals") = std::set<int>{})
      .def(
          "naive_power_estimate",
          [](const PyGraph& g, double p, int d) {
            return naive_power_estimate(g.graph, g.faces, p, d);
          },
          py::arg("p"), py::arg("d"))
      .def("amplitude", &amplitude_of, py::arg("external_indices"), py::arg("N"),
           py::arg("family") = "inverse", py::arg("p") = 2.0, py::arg("d") = 1.0,
           py::arg("epsilon") = 0.0, py::arg("singular") = false, py::arg("i_R") = 1,
           py::arg("fixed_labels") = std::map<int, int>{}, py::arg("backend") = "double")
      .def("verify_scaling", &verify_scaling, py::arg("external_indices"),
           py::arg("N_list"), py::arg("family") = "regularized", py::arg("p") = 2.0,
           py::arg("d") = 1.0, py::arg("epsilon") = 0.0, py::arg("singular") = false,
           py::arg("tolerance") = 0.3, py::arg("singular_positions") = std::set<int>{})
      .def("__repr__", [](const PyGraph& g) {
        const GraphProfile pr = profile(g.graph, g.faces);
        return "<ribamp.Graph '" + g.graph.name + "' V=" + std::to_string(pr.vertices) +
               " E=" + std::to_string(pr.edges) + " legs=" + std::to_string(pr.legs) +
               ">";
      });

  m.def(
      "parse", [](const std::string& text) { return PyGraph(parse_graph_dsl(text)); },
      py::arg("text"), "Parse a graph from DSL text.");
  m.def(
      "load", [](const std::string& path) { return PyGraph(load_graph_file(path)); },
      py::arg("path"), "Load a graph from a .rib file.");
  m.def("max_omega", &max_omega, py::arg("n"), py::arg("L"), py::arg("p"), py::arg("d"),
        "Largest divergence order at fixed leg count and loop order.");
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zerolab/app.hpp"
#include "zerolab/error.hpp"
#include "zerolab/scenarios.hpp"
#include "zerolab/suite.hpp"
#include "zerolab/zeros.hpp"

namespace py = pybind11;
using namespace zlab;

namespace {

// A builtin name, a path, or inline JSON.
ScenarioConfig config_of(const std::string& source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') return build_scenario(source);
  return app::load_config(source);
}

py::array_t<double> array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict solve(const std::string& source) {
  const auto traj = solver::solve_trajectory(config_of(source));
  py::list t, x, u;
  for (const auto& s : traj.snapshots) {
    t.append(s.time());
    x.append(array(s.nodes()));
    u.append(array(s.values()));
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  d["u"] = u;
  if (!traj.fronts.empty()) {
    d["g"] = traj.fronts.g;
    d["h"] = traj.fronts.h;
    d["q"] = traj.fronts.q;
  }
  return d;
}

py::list zeros(const std::vector<double>& x, const std::vector<double>& u, double tau_z, double tau_d) {
  py::list out;
  for (const auto& z : count_zeros(Snapshot(0.0, x, u), tau_z, tau_d).zeros)
    out.append(py::make_tuple(z.location, z.kind == ZeroKind::Multiple ? "multiple" : "simple", z.at_boundary));
  return out;
}

py::dict analyze(const std::string& source, bool checks) {
  const auto r = app::execute(config_of(source), checks);
  py::dict d;
  d["t"] = r.analysis.zeros.times();
  d["Z"] = r.analysis.zeros.counts();
  py::list drops;
  for (const auto& e : r.analysis.zeros.drops) {
    py::dict x;
    x["t_before"] = e.t_before;
    x["t_after"] = e.t_after;
    x["z_before"] = e.z_before;
    x["z_after"] = e.z_after;
    x["witness"] = to_string(e.witness);
    x["locations"] = e.locations;
    drops.append(x);
  }
  d["drops"] = drops;
  py::list labels;
  for (const auto& m : r.analysis.moments) labels.append(m.label_set());
  d["labels"] = labels;
  py::dict reports;
  for (const auto& rep : r.reports) reports[py::str(rep.name)] = rep.passed();
  d["checks"] = reports;
  d["passed"] = r.passed();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "zero-number laboratory for 1D parabolic problems";

  py::register_exception<Error>(m, "ZeroLabError");

  m.def("builtin_names", &scenarios::builtin_names);
  m.def("builtin", [](const std::string& name) { return scenarios::builtin(name).dump(); }, py::arg("name"));
  m.def("config_hash", [](const std::string& source) { return config_hash(config_of(source)); }, py::arg("config"));
  m.def("solve", &solve, py::arg("config"), "Snapshots of a scenario: dict with t, x, u (and g, h, q).");
  m.def("count_zeros", &zeros, py::arg("x"), py::arg("u"), py::arg("tau_z") = 1e-8, py::arg("tau_d") = 1e-4,
        "List of (location, kind, at_boundary).");
  m.def("classify_moments",
        [](const std::vector<double>& t, const std::vector<double>& w, double tau_z, int window, int alternations) {
          return classify_moments(t, w, {}, tau_z, window, alternations).label_set();
        },
        py::arg("t"), py::arg("w"), py::arg("tau_z") = 1e-8, py::arg("window") = 5, py::arg("alternations") = 2);
  m.def("analyze", &analyze, py::arg("config"), py::arg("checks") = true);
  m.def("run",
        [](const std::string& source, const std::string& out, bool checks, bool plots, std::uint64_t seed) {
          app::RunOptions o;
          o.checks = checks;
          o.plots = plots;
          o.seed = seed;
          return app::run(config_of(source), out, o).to_json().dump();
        },
        py::arg("config"), py::arg("out"), py::arg("checks") = false, py::arg("plots") = false, py::arg("seed") = 0);
  m.def("suite",
        [](const std::string& filter, std::uint64_t seed, int jobs) {
          suite::SuiteSummary s;
          {
            py::gil_scoped_release release;
            s = suite::run_suite({filter, seed, jobs});
          }
          py::list out;
          for (const auto& r : s.results) {
            py::dict d;
            d["id"] = r.id;
            d["passed"] = r.passed;
            d["details"] = r.details;
            d["observed"] = r.observed;
            out.append(d);
          }
          return out;
        },
        py::arg("filter") = "", py::arg("seed") = suite::SuiteOptions{}.seed, py::arg("jobs") = 1);
}

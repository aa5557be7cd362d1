#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvflow/io.hpp"
#include "tvflow/prox.hpp"
#include "tvflow/stepper.hpp"
#include "tvflow/studies.hpp"

namespace py = pybind11;
using namespace tvflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> cell_shape(const Grid& g) {
  if (g.dim() == 1) return {g.n(0)};
  return {g.n(0), g.n(1)};
}

std::vector<py::ssize_t> face_shape(const Grid& g, int axis) {
  if (g.dim() == 1) return {g.n(0) + 1};
  if (axis == 0) return {g.n(0) + 1, g.n(1)};
  return {g.n(0), g.n(1) + 1};
}

void require_shape(const Array& a, const std::vector<py::ssize_t>& shape, const char* what) {
  bool ok = a.ndim() == static_cast<py::ssize_t>(shape.size());
  for (std::size_t i = 0; ok && i < shape.size(); ++i) ok = a.shape(i) == shape[i];
  if (!ok) throw std::invalid_argument(std::string(what) + ": array shape does not match grid");
}

ScalarField to_field(const Array& a, const Grid& g, const char* what = "field") {
  require_shape(a, cell_shape(g), what);
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Array from_field(const ScalarField& u) {
  Array out(cell_shape(u.grid()));
  std::copy(u.values().begin(), u.values().end(), out.mutable_data());
  return out;
}

DualField to_dual(const py::sequence& comps, const Grid& g) {
  if (static_cast<int>(py::len(comps)) != g.dim()) {
    throw std::invalid_argument("dual field: expected one array per axis");
  }
  DualField z(g);
  for (int a = 0; a < g.dim(); ++a) {
    const Array c = comps[a].cast<Array>();
    require_shape(c, face_shape(g, a), "dual field");
    std::copy(c.data(), c.data() + c.size(), z.component(a).begin());
  }
  return z;
}

py::tuple from_dual(const DualField& z) {
  const Grid& g = z.grid();
  py::tuple out(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    Array c(face_shape(g, a));
    std::copy(z.component(a).begin(), z.component(a).end(), c.mutable_data());
    out[a] = c;
  }
  return out;
}

py::dict record_dict(const StepRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["t"] = r.t;
  d["tau"] = r.tau;
  d["l2_sq"] = 2.0 * r.half_l2_next;
  d["tv"] = r.tv_next;
  d["boundary_term"] = r.boundary_term;
  d["source_pairing"] = r.source_pairing;
  d["energy_residual"] = r.energy_residual;
  d["duality_gap"] = r.duality_gap;
  d["flatness_gap"] = r.flatness_gap;
  d["boundary_violation"] = r.boundary_violation;
  d["green_residual"] = r.green_residual;
  d["equation_residual"] = r.equation_residual;
  d["inner_iterations"] = r.inner_iterations;
  d["converged"] = r.converged;
  return d;
}

py::list report_list(const std::vector<CertificateReport>& reps) {
  py::list out;
  for (const auto& r : reps) {
    py::dict d;
    d["name"] = r.name;
    d["value"] = r.value;
    d["tolerance"] = r.tolerance;
    d["pass"] = r.pass;
    d["location"] = r.location;
    out.append(d);
  }
  return out;
}

ProxConfig prox_config(const std::string& mode, double gap_tol, int max_iters) {
  ProxConfig c;
  c.mode = parse_tv_mode(mode);
  c.gap_tol = gap_tol;
  c.max_iters = max_iters;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Total variation flow with certified implicit Euler steps";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SnapshotFormatError>(m, "SnapshotFormatError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def_static("line", &Grid::Line, py::arg("n"), py::arg("length") = 1.0)
      .def_static("rectangle", &Grid::Rectangle, py::arg("nx"), py::arg("ny"),
                  py::arg("length_x") = 1.0, py::arg("length_y") = 1.0)
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("shape", [](const Grid& g) { return cell_shape(g); })
      .def_property_readonly("spacing",
                             [](const Grid& g) {
                               std::vector<double> h;
                               for (int a = 0; a < g.dim(); ++a) h.push_back(g.h(a));
                               return h;
                             })
      .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; })
      .def("__repr__", [](const Grid& g) {
        std::string s = "Grid(";
        for (int a = 0; a < g.dim(); ++a) {
          if (a) s += ", ";
          s += std::to_string(g.n(a)) + " cells of " + format_double(g.h(a));
        }
        return s + ")";
      });

  m.def(
      "gradient", [](const Array& u, const Grid& g) { return from_dual(gradient(to_field(u, g))); },
      py::arg("u"), py::arg("grid"), "Forward differences with zero extension, one array per axis.");
  m.def(
      "divergence",
      [](const py::sequence& z, const Grid& g) { return from_field(divergence(to_dual(z, g))); },
      py::arg("z"), py::arg("grid"), "Negative adjoint of gradient.");
  m.def(
      "total_variation",
      [](const Array& u, const Grid& g, const std::string& mode) {
        return total_variation(to_field(u, g), parse_tv_mode(mode));
      },
      py::arg("u"), py::arg("grid"), py::arg("mode") = "isotropic");

  m.def(
      "rof_prox",
      [](const Array& y, double tau, const Grid& g, const std::string& mode, double gap_tol,
         int max_iters, const std::optional<py::sequence>& warm_start) {
        const ProxConfig cfg = prox_config(mode, gap_tol, max_iters);
        std::optional<DualField> warm;
        if (warm_start) warm = to_dual(*warm_start, g);
        const ScalarField data = to_field(y, g, "y");
        std::optional<ProxResult> res;
        {
          py::gil_scoped_release release;
          res = rof_prox(data, tau, cfg, warm ? &*warm : nullptr);
        }
        const ProxResult& r = *res;
        py::dict d;
        d["u"] = from_field(r.u);
        d["z"] = from_dual(r.z);
        d["gap"] = r.gap;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("y"), py::arg("tau"), py::arg("grid"), py::arg("mode") = "isotropic",
      py::arg("gap_tol") = 1e-8, py::arg("max_iters") = 200000,
      py::arg("warm_start") = py::none(),
      "Minimizer of TV(v) + |v - y|^2 / (2 tau) with its dual field and certified gap.");
  m.def(
      "duality_gap",
      [](const Array& u, const py::sequence& z, const Array& y, double tau, const Grid& g,
         const std::string& mode) {
        return duality_gap(to_field(u, g), to_dual(z, g), to_field(y, g), tau,
                           parse_tv_mode(mode));
      },
      py::arg("u"), py::arg("z"), py::arg("y"), py::arg("tau"), py::arg("grid"),
      py::arg("mode") = "isotropic");
  m.def(
      "taut_string",
      [](const Array& y, double tau, double length) {
        if (y.ndim() != 1) throw std::invalid_argument("taut_string: 1D data only");
        const Grid g = Grid::Line(static_cast<int>(y.shape(0)), length);
        return from_field(taut_string_1d(to_field(y, g), tau));
      },
      py::arg("y"), py::arg("tau"), py::arg("length") = 1.0,
      "Exact 1D solution of the same problem rof_prox solves.");

  m.def(
      "step",
      [](const Array& u_prev, const Array& f, double tau, const Grid& g, const std::string& mode,
         double gap_tol, int max_iters) {
        const StepResult r =
            step(to_field(u_prev, g), to_field(f, g), tau, prox_config(mode, gap_tol, max_iters));
        py::dict d;
        d["u"] = from_field(r.u);
        d["z"] = from_dual(r.z);
        d["record"] = record_dict(r.record);
        return d;
      },
      py::arg("u_prev"), py::arg("f"), py::arg("tau"), py::arg("grid"),
      py::arg("mode") = "isotropic", py::arg("gap_tol") = 1e-8, py::arg("max_iters") = 200000,
      "One implicit Euler step with its certificate record.");

  m.def(
      "run_config",
      [](const std::string& text, const std::optional<std::filesystem::path>& output) {
        const RunSpec spec = parse_config(text);
        const std::filesystem::path dir = output.value_or(spec.output);
        RunOutcome out;
        {
          py::gil_scoped_release release;
          out = run_to_directory(spec, text, dir);
        }
        py::dict d;
        py::list records;
        for (const auto& r : out.records) records.append(record_dict(r));
        d["records"] = records;
        d["failures"] = report_list(out.failures);
        d["aborted"] = out.aborted;
        d["output"] = dir;
        if (out.trajectory) d["final_state"] = from_field(out.trajectory->final_state);
        return d;
      },
      py::arg("text"), py::arg("output") = py::none(),
      "Runs a configuration and writes its output directory.");
  m.def(
      "verify",
      [](const std::filesystem::path& dir) {
        const VerifyOutcome v = verify_directory(dir);
        py::dict d;
        d["reports"] = report_list(v.reports);
        d["failures"] = report_list(v.failures);
        d["steps_checked"] = v.steps_checked;
        return d;
      },
      py::arg("directory"), "Re-checks every certificate from a run directory.");
  m.def(
      "read_snapshot",
      [](const std::filesystem::path& path) {
        auto [u, t] = read_snapshot(path);
        return py::make_tuple(from_field(u), t);
      },
      py::arg("path"));
  m.def("config_reference", &config_reference);

  m.def(
      "oracle_battery",
      [](int n, int count, double gap_tol, bool vary_size) {
        OracleBattery b;
        {
          py::gil_scoped_release release;
          b = oracle_battery(n, count, gap_tol, vary_size);
        }
        py::dict d;
        d["instances"] = b.instances;
        d["worst_error"] = b.worst_error;
        d["worst_gap"] = b.worst_gap;
        d["worst_instance"] = b.worst_instance;
        d["all_converged"] = b.all_converged;
        return d;
      },
      py::arg("n"), py::arg("count"), py::arg("gap_tol") = 1e-10, py::arg("vary_size") = false,
      "Compares rof_prox with taut_string on random 1D instances.");
  m.def(
      "extinction_study",
      [](const std::string& text) {
        const ExtinctionResult r = extinction_study(parse_config(text));
        py::dict d;
        d["threshold"] = r.threshold;
        d["extinction_time"] = r.extinction_time;
        d["predicted"] = r.predicted;
        d["times"] = r.times;
        d["sup_norms"] = r.sup_norms;
        d["failures"] = report_list(r.failures);
        return d;
      },
      py::arg("text"), "Zero-source run up to the first step below the threshold.");
}

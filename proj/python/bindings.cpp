#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "torus_holonomy/config.hpp"
#include "torus_holonomy/errors.hpp"
#include "torus_holonomy/evolution.hpp"
#include "torus_holonomy/harness.hpp"
#include "torus_holonomy/io.hpp"
#include "torus_holonomy/quantization.hpp"

namespace py = pybind11;
using namespace torus;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict run_output(const RunOutput& out) {
  py::dict d;
  d["matrix"] = io::matrix_from_json(out.matrix);
  d["diagnostics"] = to_python(out.diagnostics);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantized torus systems with controlled and dynamic axes";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<SplitViolation>(m, "SplitViolation", PyExc_ValueError);
  py::register_exception<BandwidthError>(m, "BandwidthError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<TorusModel>(m, "TorusModel")
      .def(py::init<int, std::vector<int>, std::vector<double>, int>(), py::arg("m"),
           py::arg("controlled"), py::arg("lam"), py::arg("N"))
      .def_property_readonly("dimension", &TorusModel::dimension)
      .def_property_readonly("truncation", &TorusModel::truncation)
      .def_property_readonly("lattice_size", &TorusModel::lattice_size)
      .def_property_readonly("controlled", &TorusModel::controlled)
      .def_property_readonly("dynamic", &TorusModel::dynamic)
      .def_property_readonly("lam", &TorusModel::lambda)
      .def("linear_index",
           [](const TorusModel& model, std::vector<int> n) { return model.linear_index(n); })
      .def("mode_at", &TorusModel::mode_at)
      .def("controlled_submodel", &TorusModel::controlled_submodel)
      .def("__eq__", [](const TorusModel& a, const TorusModel& b) { return a == b; });

  py::class_<ExperimentConfig>(m, "Config")
      .def_readonly("model", &ExperimentConfig::model)
      .def_property(
          "steps", [](const ExperimentConfig& c) { return c.run.steps; },
          [](ExperimentConfig& c, int steps) {
            if (steps < 1) throw ConfigError("/run/steps", "must be positive");
            c.run.steps = steps;
          })
      .def_property(
          "dynamic_index", [](const ExperimentConfig& c) { return c.run.dynamic_index; },
          [](ExperimentConfig& c, std::vector<int> n) { c.run.dynamic_index = std::move(n); })
      .def_property(
          "fault_injection", [](const ExperimentConfig& c) { return c.run.fault_injection; },
          [](ExperimentConfig& c, std::string f) { c.run.fault_injection = std::move(f); })
      .def_property_readonly("seed", [](const ExperimentConfig& c) { return c.run.seed; })
      .def_property_readonly("source", [](const ExperimentConfig& c) { return to_python(c.source); });

  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "parse_config", [](std::string_view text) { return parse_config_text(text); }, py::arg("text"));

  m.def(
      "action_operator",
      [](const TorusModel& model, int axis) { return action_operator(model, axis).matrix; },
      py::arg("model"), py::arg("axis"));
  m.def(
      "hamiltonian_operator",
      [](const ExperimentConfig& c) { return hamiltonian_operator(c.model, c.hamiltonian).matrix; },
      py::arg("config"));
  m.def(
      "evolve_control",
      [](const ExperimentConfig& c, int steps) {
        return evolve_control(c.model, c.connection, c.require_curve(), steps).op.matrix;
      },
      py::arg("config"), py::arg("steps"));

  m.def(
      "spectrum", [](const ExperimentConfig& c) { return to_python(run_spectrum(c)); },
      py::arg("config"));
  m.def("classical", &run_classical, py::arg("config"));
  m.def(
      "evolve", [](const ExperimentConfig& c) { return run_output(run_evolve(c)); }, py::arg("config"));
  m.def(
      "holonomy", [](const ExperimentConfig& c) { return run_output(run_holonomy(c)); },
      py::arg("config"));
  m.def(
      "verify",
      [](const ExperimentConfig* c, unsigned threads) {
        VerifyReport report;
        {
          py::gil_scoped_release release;
          report = run_verify(c, threads == 0 ? worker_threads() : threads);
        }
        return to_python(report.to_json());
      },
      py::arg("config") = nullptr, py::arg("threads") = 0);
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acons/analysis.hpp"
#include "acons/commands.hpp"
#include "acons/ct_sim.hpp"
#include "acons/dt_sim.hpp"
#include "acons/geometry.hpp"

namespace py = pybind11;
using namespace acons;

namespace {

Matrix stack(const std::vector<Vector>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

Matrix points_matrix(const std::vector<Point2>& points) {
  Matrix m(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  return m;
}

std::vector<Point2> to_points(const Matrix& m) {
  if (m.cols() != 2) throw InvalidInput("points must be an (N, 2) array");
  std::vector<Point2> points;
  for (Eigen::Index i = 0; i < m.rows(); ++i) points.emplace_back(m(i, 0), m(i, 1));
  return points;
}

ModeSchedule make_schedule(const std::vector<std::pair<double, Vector>>& epochs, double horizon) {
  std::vector<Epoch> e;
  for (const auto& [start, weights] : epochs) e.push_back(Epoch{start, weights});
  return ModeSchedule(std::move(e), horizon);
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict d;
  d["times"] = tr.times;
  d["x"] = stack(tr.x);
  d["v"] = stack(tr.v);
  d["average"] = tr.average;
  d["error"] = stack(tr.error);
  d["left_limit"] = tr.left_limit;
  d["warnings"] = tr.warnings;
  return d;
}

py::dict dt_trajectory_dict(const DtTrajectory& tr) {
  py::dict d;
  d["steps"] = tr.steps;
  d["times"] = tr.times;
  d["x"] = stack(tr.x);
  d["z"] = stack(tr.z);
  d["v"] = stack(tr.v);
  d["average"] = tr.average;
  d["error"] = stack(tr.error);
  d["warnings"] = tr.warnings;
  return d;
}

py::tuple run_command(const std::string& command, const std::string& config_json, const std::string& out_dir,
                      std::optional<std::uint64_t> seed, unsigned jobs, bool allow_unstable) {
  CommandOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  options.jobs = jobs;
  options.allow_unstable = allow_unstable;
  CommandResult result;
  {
    py::gil_scoped_release release;
    if (command.rfind("demo:", 0) == 0) {
      result = cmd_demo(command.substr(5), options);
    } else {
      const ScenarioConfig config = parse_config(Json::parse(config_json));
      if (command == "analyze") result = cmd_analyze(config, options);
      else if (command == "simulate-ct") result = cmd_simulate(config, TimeMode::kContinuous, options);
      else if (command == "simulate-dt") result = cmd_simulate(config, TimeMode::kDiscrete, options);
      else if (command == "certify") result = cmd_certify(config, options);
      else if (command == "containment") result = cmd_containment(config, options);
      else throw InvalidInput("unknown command '" + command + "'");
    }
  }
  std::vector<std::string> files;
  for (const auto& f : result.files) files.push_back(f.string());
  return py::make_tuple(result.exit_code, result.summary, result.report.dump(), result.warnings, files);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic active weighted average consensus: analysis, simulation and containment";

  static py::exception<InvalidInput> invalid_input(m, "InvalidInput", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidInput& e) {
      PyErr_SetString(invalid_input.ptr(), e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical_error.ptr(), e.what());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(invalid_input.ptr(), e.what());
    }
  });

  py::class_<Topology>(m, "Topology")
      .def(py::init<Matrix>(), py::arg("adjacency"))
      .def_static("ring", &Topology::ring, py::arg("n"), py::arg("weight") = 1.0)
      .def_static("path", &Topology::path, py::arg("n"), py::arg("weight") = 1.0)
      .def_static("complete", &Topology::complete, py::arg("n"), py::arg("weight") = 1.0)
      .def_property_readonly("size", &Topology::size)
      .def_property_readonly("adjacency", &Topology::adjacency)
      .def("laplacian", [](const Topology& t) { return laplacian(t); })
      .def("without_agent", &Topology::without_agent, py::arg("index"));

  py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
      .def_readonly("transform", &SpectralDecomposition::transform)
      .def_readonly("reduced_laplacian", &SpectralDecomposition::reduced_laplacian);
  m.def("spectral_decomposition", &spectral_decomposition, py::arg("topology"));

  py::class_<ModeSchedule>(m, "ModeSchedule")
      .def(py::init(&make_schedule), py::arg("epochs"), py::arg("horizon"),
           "epochs: list of (start, weights) pairs")
      .def_property_readonly("horizon", &ModeSchedule::horizon_end)
      .def("weights_at", &ModeSchedule::weights_at, py::arg("t"))
      .def("active_set", &ModeSchedule::active_set, py::arg("t"))
      .def("switch_times", &ModeSchedule::switch_times)
      .def("switch_count", &ModeSchedule::switch_count, py::arg("t"));

  py::class_<ReferenceSignal>(m, "ReferenceSignal")
      .def_static("constant", &ReferenceSignal::constant, py::arg("value"))
      .def_static("sinusoid", &ReferenceSignal::sinusoid, py::arg("offset"), py::arg("amplitude"),
                  py::arg("omega"), py::arg("phase") = 0.0)
      .def_static("zoh", &ReferenceSignal::zoh, py::arg("samples"), py::arg("period"))
      .def_static("polynomial", &ReferenceSignal::polynomial, py::arg("coeffs"))
      .def_static("piecewise", &ReferenceSignal::piecewise, py::arg("starts"), py::arg("pieces"))
      .def("value", [](const ReferenceSignal& s, double t) { return s.value(t); }, py::arg("t"))
      .def("derivative", [](const ReferenceSignal& s, double t) { return s.derivative(t); }, py::arg("t"));

  m.def("eigenvalues", &eigenvalues, py::arg("matrix"));
  m.def("expm", &expm_oracle, py::arg("matrix"), py::arg("t") = 1.0);
  m.def("is_hurwitz", &is_hurwitz, py::arg("matrix"));
  m.def("is_schur", &is_schur, py::arg("matrix"));
  m.def(
      "subsystem_matrix",
      [](const Topology& t, const Vector& weights) {
        const Subsystem s = subsystem_matrix(spectral_decomposition(t), weights);
        return py::make_tuple(s.matrix, s.spectrum);
      },
      py::arg("topology"), py::arg("weights"), "Compact error-dynamics matrix and its spectrum");
  m.def(
      "max_stable_step",
      [](const Topology& t, const std::vector<Vector>& patterns) {
        return max_stable_step(spectral_decomposition(t), patterns);
      },
      py::arg("topology"), py::arg("patterns"));

  m.def(
      "integrate",
      [](const Topology& t, const ModeSchedule& s, const std::vector<ReferenceSignal>& signals, const Vector& x0,
         const Vector& v0, double t_end, double h) {
        const CtScenario sc{t, s, ReferenceEnsemble(signals)};
        sc.validate();
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = integrate(sc, x0, v0, t_end, h);
        }
        return trajectory_dict(tr);
      },
      py::arg("topology"), py::arg("schedule"), py::arg("signals"), py::arg("x0"), py::arg("v0"),
      py::arg("t_end"), py::arg("h") = 1e-2, "Continuous-time RK4 run");
  m.def(
      "simulate_dt",
      [](const Topology& t, const ModeSchedule& s, const std::vector<ReferenceSignal>& signals, const Vector& x0,
         const Vector& v0, double delta_c, double delta_s, std::size_t steps) {
        const DtScenario sc{t, s, ReferenceEnsemble(signals), delta_c, delta_s, steps};
        sc.validate();
        return dt_trajectory_dict(simulate(sc, x0, v0));
      },
      py::arg("topology"), py::arg("schedule"), py::arg("signals"), py::arg("x0"), py::arg("v0"),
      py::arg("delta_c"), py::arg("delta_s"), py::arg("steps"), "Discrete-time run");

  m.def("hull_2d", [](const Matrix& points) { return points_matrix(hull_2d(to_points(points)).vertices); },
        py::arg("points"), "Convex hull vertices, counterclockwise");
  m.def(
      "contains",
      [](const Matrix& vertices, const Point2& p, double tol) {
        return contains(Hull2D{to_points(vertices)}, p, tol);
      },
      py::arg("vertices"), py::arg("point"), py::arg("tol") = 1e-9);
  m.def(
      "nested_centroid",
      [](const Matrix& points, const std::vector<std::vector<std::size_t>>& subsets) {
        return Point2(nested_centroid(to_points(points), subsets));
      },
      py::arg("points"), py::arg("subsets"));

  m.def("normalize_config", [](const std::string& text) { return to_json(parse_config(Json::parse(text))).dump(); },
        py::arg("config_json"), "Validate a config document and return it with defaults filled in");
  m.def("demo_config", [](const std::string& name) { return to_json(demo_config(name)).dump(); }, py::arg("name"));
  m.def("run_command", &run_command, py::arg("command"), py::arg("config_json"), py::arg("out_dir"),
        py::arg("seed") = std::nullopt, py::arg("jobs") = 1u, py::arg("allow_unstable") = false);
}

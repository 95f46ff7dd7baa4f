#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quantreg/amp.hpp"
#include "quantreg/experiments.hpp"
#include "quantreg/oracle.hpp"
#include "quantreg/state_evolution.hpp"

namespace py = pybind11;
using namespace quantreg;

PYBIND11_MODULE(_quantreg, m) {
  m.doc() = "quantized linear regression: replica theory, state evolution, AMP";

  py::enum_<QuantScheme>(m, "QuantScheme")
      .value("Uniform", QuantScheme::Uniform)
      .value("NonUniform", QuantScheme::NonUniform);

  py::enum_<Phase>(m, "Phase")
      .value("RS", Phase::RS)
      .value("RSB", Phase::RSB)
      .value("NonConverged", Phase::NonConverged);

  py::class_<JumpComb>(m, "JumpComb")
      .def_readonly("thresholds", &JumpComb::thresholds)
      .def_readonly("gaps", &JumpComb::gaps);

  py::class_<Codebook>(m, "Codebook")
      .def_static("uniform", &Codebook::uniform, py::arg("n_p"), py::arg("omega"))
      .def_static("non_uniform", &Codebook::non_uniform, py::arg("n_p"), py::arg("omega"))
      .def_static("make", &Codebook::make)
      .def_property_readonly("levels", &Codebook::levels)
      .def_property_readonly("thresholds", &Codebook::thresholds)
      .def_property_readonly("n_p", &Codebook::n_p)
      .def_property_readonly("omega", &Codebook::omega)
      .def_property_readonly("scheme", &Codebook::scheme)
      .def_property_readonly("bits", &Codebook::bits)
      .def("quantize", py::overload_cast<double>(&Codebook::quantize, py::const_))
      .def("quantize_vec",
           py::overload_cast<std::span<const double>>(&Codebook::quantize, py::const_))
      .def("jumps", &Codebook::jumps)
      .def("to_json", &Codebook::to_json)
      .def_static("from_json", &Codebook::from_json);

  m.def("bits_of", &bits_of);
  m.def("np_of_bits", &np_of_bits);

  py::class_<FieldContext>(m, "FieldContext")
      .def(py::init<double, double>(), py::arg("h"), py::arg("theta_hat"))
      .def_readwrite("h", &FieldContext::h)
      .def_readwrite("theta_hat", &FieldContext::theta_hat);

  m.def("phi_star", &phi_star);
  m.def("phi_beta", [](double u, const FieldContext& ctx, const Codebook& cb, double beta) {
    const auto r = phi_beta(u, ctx, cb, beta);
    return std::pair{r.mean, r.dmean_du};
  });
  m.def("gauss_second_moment", &gauss_second_moment);
  m.def("gauss_chi", &gauss_chi);
  m.def("gauss_at_integral", &gauss_at_integral);
  m.def(
      "gauss_quadrature",
      [](const std::function<double(double)>& f, std::vector<double> breaks, int nodes) {
        return gauss_quadrature(f, breaks, nodes);
      },
      py::arg("f"), py::arg("breakpoints") = std::vector<double>{}, py::arg("nodes") = 24);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double alpha, double rho, double sigma2, double lambda) {
             return ModelParams{alpha, rho, sigma2, lambda};
           }),
           py::arg("alpha"), py::arg("rho") = 1.0, py::arg("sigma2") = 0.0,
           py::arg("lambda_") = 0.0)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("rho", &ModelParams::rho)
      .def_readwrite("sigma2", &ModelParams::sigma2)
      .def_readwrite("lambda_", &ModelParams::lambda);

  py::class_<SaddleState>(m, "SaddleState")
      .def(py::init<>())
      .def_readwrite("Q", &SaddleState::Q)
      .def_readwrite("m", &SaddleState::m)
      .def_readwrite("chi", &SaddleState::chi)
      .def_readonly("Q_hat", &SaddleState::Q_hat)
      .def_readonly("m_hat", &SaddleState::m_hat)
      .def_readonly("chi_hat", &SaddleState::chi_hat)
      .def_readonly("h", &SaddleState::h)
      .def_readonly("theta_hat", &SaddleState::theta_hat);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("damping", &SolveOptions::damping)
      .def_readwrite("tol", &SolveOptions::tol)
      .def_readwrite("max_iter", &SolveOptions::max_iter)
      .def_readwrite("has_init", &SolveOptions::has_init)
      .def_readwrite("init", &SolveOptions::init);

  py::class_<ReplicaSolution>(m, "ReplicaSolution")
      .def_readonly("state", &ReplicaSolution::state)
      .def_readonly("gen_error", &ReplicaSolution::gen_error)
      .def_readonly("stability", &ReplicaSolution::stability)
      .def_readonly("phase", &ReplicaSolution::phase)
      .def_readonly("iterations", &ReplicaSolution::iterations)
      .def_readonly("residual", &ReplicaSolution::residual);

  m.def("saddle_step", &saddle_step, py::arg("state"), py::arg("params"), py::arg("codebook"),
        py::arg("damping") = 0.5);
  m.def("solve", &solve, py::arg("params"), py::arg("codebook"),
        py::arg("options") = SolveOptions{});
  m.def("ridge_saddle", &ridge_saddle, py::arg("params"), py::arg("options") = SolveOptions{});
  m.def("gen_error", &gen_error);

  py::class_<SEState>(m, "SEState")
      .def_readonly("V", &SEState::V)
      .def_readonly("E", &SEState::E)
      .def_readonly("t", &SEState::t)
      .def_readonly("xi", &SEState::xi)
      .def_readonly("Lambda", &SEState::Lambda);

  py::class_<SEOptions>(m, "SEOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SEOptions::tol)
      .def_readwrite("max_iter", &SEOptions::max_iter)
      .def_readwrite("V0", &SEOptions::V0)
      .def_readwrite("E0", &SEOptions::E0)
      .def_readwrite("damping", &SEOptions::damping);

  py::class_<SETrajectory>(m, "SETrajectory")
      .def_readonly("states", &SETrajectory::states)
      .def_readonly("converged", &SETrajectory::converged)
      .def_readonly("iterations", &SETrajectory::iterations)
      .def_readonly("residual", &SETrajectory::residual);

  m.def("make_se_state", &make_se_state);
  m.def("se_step", &se_step);
  m.def("se_run", &se_run, py::arg("params"), py::arg("codebook"),
        py::arg("options") = SEOptions{});
  m.def("amp_fixed_point_stability", &amp_fixed_point_stability);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("X", &Dataset::X)
      .def_readwrite("y", &Dataset::y)
      .def_readwrite("w0", &Dataset::w0)
      .def_readwrite("rho", &Dataset::rho)
      .def_readwrite("sigma2", &Dataset::sigma2)
      .def_readwrite("seed", &Dataset::seed)
      .def_readwrite("N", &Dataset::N)
      .def_readwrite("M", &Dataset::M);

  m.def("generate", &generate, py::arg("N"), py::arg("M"), py::arg("rho"), py::arg("sigma2"),
        py::arg("seed"));
  m.def("save_csv", py::overload_cast<const Dataset&, const std::string&>(&save_csv));
  m.def("load_csv", py::overload_cast<const std::string&>(&load_csv));

  py::class_<AMPConfig>(m, "AMPConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &AMPConfig::lambda)
      .def_readwrite("beta", &AMPConfig::beta)
      .def_readwrite("t_max", &AMPConfig::t_max)
      .def_readwrite("damping", &AMPConfig::damping)
      .def_readwrite("tol", &AMPConfig::tol)
      .def_readwrite("anneal", &AMPConfig::anneal)
      .def_readwrite("beta_max", &AMPConfig::beta_max)
      .def_readwrite("seed", &AMPConfig::seed);

  py::class_<AMPTrajectoryPoint>(m, "AMPTrajectoryPoint")
      .def_readonly("t", &AMPTrajectoryPoint::t)
      .def_readonly("V_mean", &AMPTrajectoryPoint::V_mean)
      .def_readonly("E_emp", &AMPTrajectoryPoint::E_emp);

  py::class_<AMPResult>(m, "AMPResult")
      .def_readonly("w_hat", &AMPResult::w_hat)
      .def_readonly("gen_error", &AMPResult::gen_error)
      .def_readonly("converged", &AMPResult::converged)
      .def_readonly("iterations", &AMPResult::iterations)
      .def_readonly("trajectory", &AMPResult::trajectory);

  m.def("amp_run", &amp_run, py::arg("dataset"), py::arg("codebook"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("empirical_gen_error",
        [](std::vector<double> w_hat, std::vector<double> w0, double sigma2) {
          return empirical_gen_error(w_hat, w0, sigma2);
        });
  m.def("energy", [](std::vector<double> w, const Dataset& d, const Codebook& cb, double lambda) {
    return energy(w, d, cb, lambda);
  });

  py::class_<EnumResult>(m, "EnumResult")
      .def_readonly("w_hat", &EnumResult::w_hat)
      .def_readonly("energy", &EnumResult::energy);

  m.def("enumerate_min", &enumerate_min, py::arg("dataset"), py::arg("codebook"),
        py::arg("lambda_"), py::call_guard<py::gil_scoped_release>());
  m.def("ridge_exact", &ridge_exact, py::arg("dataset"), py::arg("lambda_"));

  py::class_<EnsembleSummary>(m, "EnsembleSummary")
      .def_readonly("n_runs", &EnsembleSummary::n_runs)
      .def_readonly("n_converged", &EnsembleSummary::n_converged)
      .def_readonly("mean_gen_error", &EnsembleSummary::mean_gen_error)
      .def_readonly("stderr_gen_error", &EnsembleSummary::stderr_gen_error)
      .def_readonly("replica_gen_error", &EnsembleSummary::replica_gen_error)
      .def_readonly("replica_phase", &EnsembleSummary::replica_phase)
      .def_readonly("agree", &EnsembleSummary::agree)
      .def_readonly("run_gen_errors", &EnsembleSummary::run_gen_errors)
      .def_readonly("run_iterations", &EnsembleSummary::run_iterations);

  m.def("amp_ensemble", &amp_ensemble, py::arg("params"), py::arg("codebook"), py::arg("n_runs"),
        py::arg("N"), py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  m.def("derive_seed", &derive_seed);
}

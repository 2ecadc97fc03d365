#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lieavg/algebra.hpp"
#include "lieavg/averaging.hpp"
#include "lieavg/clflow.hpp"
#include "lieavg/commands.hpp"
#include "lieavg/config.hpp"
#include "lieavg/expr.hpp"
#include "lieavg/harness.hpp"
#include "lieavg/integrate.hpp"
#include "lieavg/reduced.hpp"

namespace py = pybind11;
using namespace lieavg;

namespace {

std::vector<expr::Expression> parse_all(const std::vector<std::string>& sources) {
  std::vector<expr::Expression> out;
  for (const auto& s : sources) out.push_back(expr::Expression::parse(s));
  return out;
}

py::tuple trajectory_tuple(const Trajectory& t) {
  return py::make_tuple(t.times, Eigen::MatrixXd(t.states), t.diverged);
}

}  // namespace

PYBIND11_MODULE(_lieavg, m) {
  m.doc() = "Averaging of fast-oscillating Euler equations on Lie algebras";

  py::register_exception<expr::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<expr::EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<config::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<expr::Expression>(m, "Expression")
      .def(py::init(&expr::Expression::parse), py::arg("source"))
      .def("evaluate", [](const expr::Expression& e, const std::map<std::string, double>& env) {
        return e.evaluate(expr::Env(env.begin(), env.end()));
      })
      .def_property_readonly("free_variables", &expr::Expression::free_variables)
      .def("__str__", &expr::Expression::to_string)
      .def("__repr__", [](const expr::Expression& e) { return "Expression(\"" + e.source() + "\")"; });

  py::class_<LieAlgebra>(m, "LieAlgebra")
      .def_property_readonly("dim", &LieAlgebra::dim)
      .def_property_readonly("name", &LieAlgebra::name)
      .def_property_readonly("inertia", &LieAlgebra::inertia)
      .def("c", &LieAlgebra::c)
      .def("with_inertia", &LieAlgebra::with_inertia, py::arg("inertia"))
      .def("energy_norm", [](const LieAlgebra& A, const Eigen::VectorXd& mu) { return A.energy_norm({mu}); })
      .def("jacobi_residual",
           [](const LieAlgebra& A) { return jacobi_residual(A.dim(), A.structure_constants()); });

  m.def("builtin_algebra",
        [](const std::string& name, int N, bool laplacian) {
          return builtin_algebra(name, {N, laplacian ? SineInertia::Laplacian : SineInertia::Identity});
        },
        py::arg("name"), py::arg("N") = 5, py::arg("laplacian") = false);
  m.def("parse_algebra", &parse_algebra, py::arg("text"), py::arg("name") = "custom");

  m.def("bracket", [](const LieAlgebra& A, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    return bracket(A, {X}, {Y}).coords;
  });
  m.def("coadjoint", [](const LieAlgebra& A, const Eigen::VectorXd& X, const Eigen::VectorXd& mu) {
    return coadjoint(A, {X}, {mu}).coords;
  });
  m.def("pairing", [](const Eigen::VectorXd& mu, const Eigen::VectorXd& X) { return pairing({mu}, {X}); });
  m.def("euler_rhs", [](const LieAlgebra& A, const Eigen::VectorXd& mu) { return euler_rhs(A, {mu}).coords; });
  m.def("averaging_cocycle", [](const LieAlgebra& A, const Eigen::VectorXd& V0) {
    return averaging_cocycle(A, {V0}).W;
  });
  m.def("extended_euler_rhs",
        [](const LieAlgebra& A, const Eigen::VectorXd& V0, const Eigen::VectorXd& mu) {
          return extended_euler_rhs(averaging_cocycle(A, {V0}), {mu}).coords;
        },
        py::arg("algebra"), py::arg("drift"), py::arg("m"));

  m.def("drift_vector",
        [](const LieAlgebra& A, const std::vector<std::string>& v1, int K) {
          return drift_vector(A, OscillationProfile::from_expressions(parse_all(v1), K)).coords;
        },
        py::arg("algebra"), py::arg("v1"), py::arg("K") = 256);
  m.def("averaged_rhs",
        [](const LieAlgebra& A, const std::vector<std::string>& y1, const Eigen::VectorXd& x, int K) {
          return averaged_rhs(lie_bilinear(A), OscillationProfile::from_expressions(parse_all(y1), K), x);
        },
        py::arg("algebra"), py::arg("y1"), py::arg("x"), py::arg("K") = 256);
  m.def("shifted_averaged_rhs",
        [](const LieAlgebra& A, const std::vector<std::string>& y1, const Eigen::VectorXd& x, int K,
           std::uint64_t seed) {
          BilinearOperator B = lie_bilinear(A);
          B.antisymmetric = B.jacobi = true;
          const auto p = OscillationProfile::from_expressions(parse_all(y1), K);
          const VerifiedBracket vb = verify_bracket(B, seed);
          return shifted_averaged_rhs(vb, shift_vector(B, p), x);
        },
        py::arg("algebra"), py::arg("y1"), py::arg("x"), py::arg("K") = 256, py::arg("seed") = 0);

  m.def("integrate_euler",
        [](const LieAlgebra& A, const Eigen::VectorXd& m0, double T, double dt, int stride,
           std::optional<Eigen::VectorXd> drift) {
          const CentralExtension E =
              averaging_cocycle(A, {drift ? *drift : Eigen::VectorXd::Zero(A.dim())});
          py::gil_scoped_release release;
          const Trajectory t = integrate_fixed(
              [&E](double, const State& m) { return extended_euler_rhs(E, {m}).coords; }, m0, 0.0, T,
              dt, stride);
          py::gil_scoped_acquire acquire;
          return trajectory_tuple(t);
        },
        py::arg("algebra"), py::arg("m0"), py::arg("T"), py::arg("dt"), py::arg("stride") = 1,
        py::arg("drift") = py::none());

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("epsilon", &SweepRecord::epsilon)
      .def_readonly("max_err", &SweepRecord::max_err)
      .def_readonly("energy_drift", &SweepRecord::energy_drift)
      .def_readonly("diverged", &SweepRecord::diverged);
  m.def("sweep",
        [](const LieAlgebra& A, const std::vector<std::string>& v1, const Eigen::VectorXd& m_init,
           const std::vector<double>& epsilons, double T, int steps_per_period, int K) {
          FastSlowScenario s{A, parse_all(v1), {m_init}, epsilons};
          s.T = T;
          s.steps_per_period = steps_per_period;
          s.K = K;
          py::gil_scoped_release release;
          SweepResult r = sweep(s);
          py::gil_scoped_acquire acquire;
          return py::make_tuple(r.records, r.slope);
        },
        py::arg("algebra"), py::arg("v1"), py::arg("m_init"), py::arg("epsilons"), py::arg("T") = 5.0,
        py::arg("steps_per_period") = 256, py::arg("K") = 256);

  m.def("cl_integrate",
        [](const std::string& omega0, int N, std::pair<double, double> drift, double T, double dt) {
          const auto w0 = cl::VorticityField::from_expression(expr::Expression::parse(omega0), N);
          const cl::StokesDrift d{drift.first, drift.second};
          py::gil_scoped_release release;
          const cl::ClRun run = cl::cl_integrate(w0, d, T, dt, std::max(1, static_cast<int>(T / dt)));
          py::gil_scoped_acquire acquire;
          const auto& v = run.frames.back().values();
          Eigen::MatrixXd field =
              Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                  v.data(), N, N);
          return py::make_tuple(field, cl::energy_shifted(run.frames.back(), d), run.diverged);
        },
        py::arg("omega0"), py::arg("N"), py::arg("drift"), py::arg("T"), py::arg("dt"));

  m.def("run_command",
        [](const std::string& sub, const std::filesystem::path& config, const std::filesystem::path& out,
           std::optional<std::uint64_t> seed) {
          std::ostringstream o, e;
          int code;
          {
            py::gil_scoped_release release;
            code = cli::run(sub, {config, out, seed}, o, e);
          }
          return py::make_tuple(code, o.str(), e.str());
        },
        py::arg("subcommand"), py::arg("config"), py::arg("out") = ".", py::arg("seed") = py::none());
}

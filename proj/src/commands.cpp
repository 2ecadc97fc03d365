#include "lieavg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "lieavg/averaging.hpp"
#include "lieavg/clflow.hpp"
#include "lieavg/integrate.hpp"
#include "lieavg/numfmt.hpp"
#include "lieavg/reduced.hpp"

namespace lieavg::cli {

namespace {

using config::Config;
using config::ConfigError;

// Portable uniform draws in [-1, 1] so outputs do not depend on the
// standard library's distribution implementation.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return 2.0 * static_cast<double>(rng_() >> 11) * 0x1.0p-53 - 1.0; }
  Eigen::VectorXd vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }
  Eigen::VectorXd in_ball(int n) {
    Eigen::VectorXd v;
    do v = vector(n);
    while (v.norm() > 1.0);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t seed_of(const Config& cfg, const Options& opts) {
  if (opts.seed) return *opts.seed;
  const long s = cfg.integer_or("run", "seed", 0);
  if (s < 0) cfg.fail(cfg.line_of("run", "seed"), "seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

std::filesystem::path base_dir(const Options& opts) {
  const auto parent = opts.config.parent_path();
  return parent.empty() ? std::filesystem::path(".") : parent;
}

expr::Expression expression(const Config& cfg, std::string_view sec, std::string_view key,
                            const std::string& text, const std::vector<std::string>& allowed) {
  try {
    auto e = expr::Expression::parse(text);
    for (const auto& v : e.free_variables()) {
      if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        cfg.fail(cfg.line_of(sec, key), "unknown variable `" + v + "` in `" + std::string(key) + "`");
      }
    }
    return e;
  } catch (const expr::ParseError& e) {
    cfg.fail(cfg.line_of(sec, key), "in `" + std::string(key) + "`: " + e.what() + " (column " +
                                        std::to_string(e.column()) + ")");
  }
}

std::vector<expr::Expression> expressions(const Config& cfg, std::string_view sec,
                                          std::string_view key,
                                          const std::vector<std::string>& allowed) {
  std::vector<expr::Expression> out;
  for (const auto& s : cfg.strings(sec, key)) out.push_back(expression(cfg, sec, key, s, allowed));
  return out;
}

Eigen::VectorXd vector_of(const Config& cfg, std::string_view sec, std::string_view key, int n) {
  const auto v = cfg.numbers(sec, key);
  if (n >= 0 && static_cast<int>(v.size()) != n) {
    cfg.fail(cfg.line_of(sec, key), "`" + std::string(key) + "` needs " + std::to_string(n) +
                                        " entries, got " + std::to_string(v.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double positive(const Config& cfg, std::string_view sec, std::string_view key, double fallback) {
  const double x = cfg.number_or(sec, key, fallback);
  if (!(x > 0.0)) cfg.fail(cfg.line_of(sec, key), "`" + std::string(key) + "` must be positive");
  return x;
}

int positive_int(const Config& cfg, std::string_view sec, std::string_view key, long fallback) {
  const long x = cfg.integer_or(sec, key, fallback);
  if (x < 1 || x > std::numeric_limits<int>::max()) {
    cfg.fail(cfg.line_of(sec, key), "`" + std::string(key) + "` must be a positive integer");
  }
  return static_cast<int>(x);
}

std::vector<std::string> m_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("m" + std::to_string(i + 1));
  return names;
}

std::string join(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + ")";
}

std::ofstream open_output(const Options& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out);
  const auto path = opts.out / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void write_row(std::ostream& f, double t, const Eigen::VectorXd& x,
               std::initializer_list<double> extra) {
  f << format_double(t);
  for (Eigen::Index i = 0; i < x.size(); ++i) f << ',' << format_double(x[i]);
  for (double e : extra) f << ',' << format_double(e);
  f << '\n';
}

double relative_drift(const std::vector<double>& series) {
  double d = 0.0;
  for (double v : series) d = std::max(d, std::abs(v - series.front()));
  const double scale = std::abs(series.front());
  return scale > 0.0 ? d / scale : d;
}

// ---------------------------------------------------------------- algebra-check

int algebra_check(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  cfg.check_sections({"algebra", "check", "run"});
  cfg.check_keys("check", {"triples", "drift", "tolerance"});
  const double tol = positive(cfg, "check", "tolerance", 1e-12);
  const int triples = positive_int(cfg, "check", "triples", 100);

  // File algebras are checked before construction so invalid input still
  // gets its residuals reported.
  if (cfg.has("algebra", "file")) {
    const auto path = base_dir(opts) / cfg.string("algebra", "file");
    std::ifstream in(path, std::ios::binary);
    if (!in) cfg.fail(cfg.line_of("algebra", "file"), "cannot open algebra file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RawAlgebra raw;
    try {
      raw = parse_algebra_raw(ss.str());
    } catch (const std::exception& e) {
      cfg.fail(cfg.line_of("algebra", "file"), path.string() + ": " + e.what());
    }
    const double jac = jacobi_residual(raw.n, raw.c);
    const double anti = antisymmetry_residual(raw.n, raw.c);
    if (jac > tol || anti > tol) {
      out << "algebra " << path.filename().string() << " (dim " << raw.n << ")\n";
      out << "Jacobi residual " << format_sci(jac) << "\n";
      out << "antisymmetry residual " << format_sci(anti) << "\n";
      err << "error: structure constants do not define a Lie algebra\n";
      return kClaimFailed;
    }
  }
  const LieAlgebra A = algebra_from_config(cfg, base_dir(opts));
  const int n = A.dim();
  Uniform rng(seed_of(cfg, opts));
  const AlgebraElement V0{cfg.has("check", "drift") ? vector_of(cfg, "check", "drift", n)
                                                    : rng.vector(n)};
  const CentralExtension E = averaging_cocycle(A, V0);

  double pairing_r = 0.0, cocycle_r = E.cocycle_identity_residual(), cobound_r = 0.0, ext_r = 0.0;
  double casimir_r = 0.0;
  for (int t = 0; t < triples; ++t) {
    const AlgebraElement X{rng.vector(n)}, Y{rng.vector(n)}, Z{rng.vector(n)};
    const DualElement mu{rng.vector(n)};
    pairing_r = std::max(pairing_r, std::abs(pairing(coadjoint(A, X, mu), Y) -
                                             pairing(mu, bracket(A, X, Y))));
    cocycle_r = std::max(cocycle_r, std::abs(E.cocycle(bracket(A, X, Y), Z) +
                                             E.cocycle(bracket(A, Y, Z), X) +
                                             E.cocycle(bracket(A, Z, X), Y)));
    cobound_r = std::max(cobound_r, std::abs(E.cocycle(X, Y) +
                                             pairing(A.apply_inertia(V0), bracket(A, X, Y))));
    const Eigen::VectorXd lhs = extended_euler_rhs(E, mu).coords;
    const DualElement shifted{mu.coords + A.apply_inertia(V0).coords};
    const Eigen::VectorXd rhs = -extended_coadjoint(E, A.velocity(shifted), 1.0, shifted).coords;
    ext_r = std::max(ext_r, (lhs - rhs).cwiseAbs().maxCoeff());
    casimir_r = std::max(casimir_r, std::abs(pairing(euler_rhs(A, mu), A.velocity(mu))));
  }

  const double jac = jacobi_residual(n, A.structure_constants());
  const double anti = antisymmetry_residual(n, A.structure_constants());
  out << "algebra " << A.name() << " (dim " << n << ")\n";
  out << "Jacobi residual " << format_sci(jac) << "\n";
  out << "antisymmetry residual " << format_sci(anti) << "\n";
  out << "pairing identity residual " << format_sci(pairing_r) << "\n";
  out << "energy orthogonality residual " << format_sci(casimir_r) << "\n";
  out << "cocycle antisymmetry residual " << format_sci(E.antisymmetry_residual()) << "\n";
  out << "cocycle identity residual " << format_sci(cocycle_r) << "\n";
  out << "coboundary identity residual " << format_sci(cobound_r) << "\n";
  out << "extended Euler identity residual " << format_sci(ext_r) << "\n";
  const double worst = std::max({jac, anti, pairing_r, casimir_r, E.antisymmetry_residual(),
                                 cocycle_r, cobound_r, ext_r});
  if (worst > tol) {
    err << "error: residual " << format_sci(worst) << " exceeds tolerance " << format_sci(tol)
        << "\n";
    return kClaimFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------- avg-rhs

int avg_rhs(const Config& cfg, const Options& opts, std::ostream& out, std::ostream&) {
  cfg.check_sections({"algebra", "avg", "run"});
  cfg.check_keys("avg", {"v1", "point", "K", "triples"});
  const LieAlgebra A = algebra_from_config(cfg, base_dir(opts));
  const int n = A.dim();
  const auto v1 = expressions(cfg, "avg", "v1", {"t"});
  if (static_cast<int>(v1.size()) != n) {
    cfg.fail(cfg.line_of("avg", "v1"), "`v1` needs " + std::to_string(n) + " components");
  }
  const int K = positive_int(cfg, "avg", "K", 256);
  if (K < 16) cfg.fail(cfg.line_of("avg", "K"), "`K` must be at least 16");
  const std::uint64_t seed = seed_of(cfg, opts);
  Uniform rng(seed);
  const Eigen::VectorXd x = cfg.has("avg", "point") ? vector_of(cfg, "avg", "point", n) : rng.in_ball(n);

  const OscillationProfile p = OscillationProfile::from_expressions(v1, K);
  if (periodic_mean(p).cwiseAbs().maxCoeff() > 1e-10) {
    cfg.fail(cfg.line_of("avg", "v1"), "`v1` must have zero mean over a period");
  }
  BilinearOperator B = lie_bilinear(A);
  const Eigen::VectorXd first = averaged_rhs(B, p, x);
  out << "point " << join(x) << "\n";
  out << "drift V1 " << join(drift_vector(A, p).coords) << "\n";
  out << "averaged field " << join(first) << "\n";

  B.antisymmetric = true;
  B.jacobi = true;
  try {
    const VerifiedBracket vb = verify_bracket(B, seed, positive_int(cfg, "avg", "triples", 100));
    const Eigen::VectorXd V = shift_vector(B, p);
    const Eigen::VectorXd second = shifted_averaged_rhs(vb, V, x);
    out << "shift V " << join(V) << "\n";
    out << "shifted averaged field " << join(second) << "\n";
    out << "discrepancy " << format_sci((first - second).cwiseAbs().maxCoeff()) << "\n";
  } catch (const FlagError& e) {
    out << "shifted form not applicable: " << e.what() << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- euler-run

int euler_run(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  cfg.check_sections({"algebra", "euler", "run"});
  cfg.check_keys("euler", {"m0", "T", "dt", "stride", "drift", "hamiltonian"});
  const LieAlgebra A = algebra_from_config(cfg, base_dir(opts));
  const int n = A.dim();
  const Eigen::VectorXd m0 = vector_of(cfg, "euler", "m0", n);
  const double T = positive(cfg, "euler", "T", 10.0);
  const double dt = positive(cfg, "euler", "dt", 1e-3);
  const int stride = positive_int(cfg, "euler", "stride", 1);
  const AlgebraElement V{cfg.has("euler", "drift") ? vector_of(cfg, "euler", "drift", n)
                                                   : Eigen::VectorXd::Zero(n)};

  VectorField f;
  std::function<double(const Eigen::VectorXd&)> energy;
  const CentralExtension E = averaging_cocycle(A, V);
  if (cfg.has("euler", "hamiltonian")) {
    if (cfg.has("euler", "drift")) {
      cfg.fail(cfg.line_of("euler", "hamiltonian"), "`hamiltonian` and `drift` are exclusive");
    }
    const auto names = m_names(n);
    const auto H = expression(cfg, "euler", "hamiltonian", cfg.string("euler", "hamiltonian"), names);
    const auto h = H.bind(names);
    f = [&A, H](double, const State& m) { return lie_poisson_rhs(A, H, {m}).coords; };
    energy = [h](const Eigen::VectorXd& m) {
      return h(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
    };
  } else {
    f = [&E](double, const State& m) { return extended_euler_rhs(E, {m}).coords; };
    energy = [&A, &V](const Eigen::VectorXd& m) { return shifted_energy(A, V, {m}); };
  }

  const Trajectory traj = integrate_fixed(f, m0, 0.0, T, dt, stride);
  auto csv = open_output(opts, "euler.csv");
  csv << "t";
  for (const auto& name : m_names(n)) csv << ',' << name;
  csv << ",energy,casimir\n";
  std::vector<double> es, cs;
  for (int k = 0; k < traj.samples(); ++k) {
    const Eigen::VectorXd m = traj.state(k);
    es.push_back(energy(m));
    cs.push_back(m.squaredNorm());
    write_row(csv, traj.times[static_cast<std::size_t>(k)], m, {es.back(), cs.back()});
  }
  out << "final state " << join(traj.final_state()) << "\n";
  out << "energy relative drift " << format_sci(relative_drift(es)) << "\n";
  out << "casimir |m|^2 relative drift " << format_sci(relative_drift(cs)) << "\n";
  if (traj.diverged) {
    err << "error: run diverged at t = " << format_double(*traj.diverged_at) << "\n";
    return kDiverged;
  }
  return kOk;
}

// ---------------------------------------------------------------- reduced-run

int reduced_run(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  cfg.check_sections({"algebra", "reduced", "run"});
  cfg.check_keys("reduced", {"k", "atilde", "potential", "omega", "q0", "p0", "mu0", "T", "dt",
                             "stride", "hamiltonian"});
  const LieAlgebra A = algebra_from_config(cfg, base_dir(opts));
  const int n = A.dim();
  const int k = positive_int(cfg, "reduced", "k", 1);
  std::vector<std::string> qn;
  for (int u = 0; u < k; ++u) qn.push_back("q" + std::to_string(u + 1));

  auto atilde = expressions(cfg, "reduced", "atilde", qn);
  const auto potential = cfg.has("reduced", "potential")
                             ? expression(cfg, "reduced", "potential",
                                          cfg.string("reduced", "potential"), qn)
                             : expr::Expression::constant(0.0);
  std::optional<std::vector<expr::Expression>> omega;
  if (cfg.has("reduced", "omega")) omega = expressions(cfg, "reduced", "omega", qn);
  std::optional<ConnectionSpec> spec;
  try {
    spec.emplace(k, n, std::move(atilde), potential, std::move(omega));
  } catch (const std::invalid_argument& e) {
    cfg.fail(cfg.line_of("reduced", "atilde"), e.what());
  }

  ReducedState s0{vector_of(cfg, "reduced", "q0", k), vector_of(cfg, "reduced", "p0", k),
                  {vector_of(cfg, "reduced", "mu0", n)}};
  const double T = positive(cfg, "reduced", "T", 10.0);
  const double dt = positive(cfg, "reduced", "dt", 1e-3);
  const int stride = positive_int(cfg, "reduced", "stride", 1);

  std::optional<expr::Expression> H;
  if (cfg.has("reduced", "hamiltonian")) {
    H = expression(cfg, "reduced", "hamiltonian", cfg.string("reduced", "hamiltonian"),
                   reduced_variable_names(k, n));
  }
  const auto names = reduced_variable_names(k, n);
  std::optional<expr::BoundExpression> Hb;
  if (H) Hb = H->bind(names);

  const VectorField f = [&](double, const State& x) -> State {
    const ReducedState s = ReducedState::unflatten(x, k, n);
    return (H ? generic_reduced_rhs(A, *spec, *H, s) : natural_reduced_rhs(A, *spec, s)).flatten();
  };
  auto hamiltonian = [&](const State& x) {
    if (Hb) return (*Hb)(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    return natural_hamiltonian(A, *spec, ReducedState::unflatten(x, k, n));
  };

  if (const auto d = curvature_discrepancy(*spec, A, s0.q)) {
    out << "curvature discrepancy at q0 " << format_sci(*d) << "\n";
  }
  const Trajectory traj = integrate_fixed(f, s0.flatten(), 0.0, T, dt, stride);
  auto csv = open_output(opts, "reduced.csv");
  csv << "t";
  for (const auto& name : names) csv << ',' << name;
  csv << ",H\n";
  std::vector<double> hs;
  for (int j = 0; j < traj.samples(); ++j) {
    const State x = traj.state(j);
    hs.push_back(hamiltonian(x));
    write_row(csv, traj.times[static_cast<std::size_t>(j)], x, {hs.back()});
  }
  out << "final state " << join(traj.final_state()) << "\n";
  out << "H relative drift " << format_sci(relative_drift(hs)) << "\n";
  if (traj.diverged) {
    err << "error: run diverged at t = " << format_double(*traj.diverged_at) << "\n";
    return kDiverged;
  }
  return kOk;
}

// ---------------------------------------------------------------- cl2d

int cl2d(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  cfg.check_sections({"cl", "run"});
  cfg.check_keys("cl", {"N", "omega0", "random", "kmax", "amplitude", "drift", "T", "dt", "stride",
                        "functionals"});
  const int N = positive_int(cfg, "cl", "N", 64);
  const auto d = vector_of(cfg, "cl", "drift", 2);
  const cl::StokesDrift drift{d[0], d[1]};
  const double T = positive(cfg, "cl", "T", 1.0);
  const double dt = positive(cfg, "cl", "dt", 1e-3);
  const int stride = positive_int(cfg, "cl", "stride", 1);

  std::optional<cl::VorticityField> w0;
  try {
    if (cfg.has("cl", "omega0")) {
      if (cfg.boolean_or("cl", "random", false)) {
        cfg.fail(cfg.line_of("cl", "random"), "`random` and `omega0` are exclusive");
      }
      w0 = cl::VorticityField::from_expression(
          expression(cfg, "cl", "omega0", cfg.string("cl", "omega0"), {"x", "y"}), N);
    } else if (cfg.boolean_or("cl", "random", false)) {
      w0 = cl::VorticityField::random_band_limited(N, positive_int(cfg, "cl", "kmax", 4),
                                                   seed_of(cfg, opts),
                                                   positive(cfg, "cl", "amplitude", 1.0));
    } else {
      cfg.fail(cfg.line_of("cl", "omega0"), "missing required key `omega0` (or `random = true`)");
    }
  } catch (const std::invalid_argument& e) {
    cfg.fail(cfg.line_of("cl", cfg.has("cl", "omega0") ? "omega0" : "N"), e.what());
  }

  std::vector<std::string> fsrc{"w^2", "w^4"};
  std::vector<expr::Expression> fs;
  if (cfg.has("cl", "functionals")) {
    fs = expressions(cfg, "cl", "functionals", {"w"});
    fsrc = cfg.strings("cl", "functionals");
  } else {
    for (const auto& s : fsrc) fs.push_back(expr::Expression::parse(s));
  }

  const cl::ClRun run = cl::cl_integrate(*w0, drift, T, dt, stride);
  if (run.cfl_warning) err << "warning: CFL number exceeds 0.5 during the run\n";

  auto csv = open_output(opts, "cl2d.csv");
  csv << "t,energy";
  for (std::size_t i = 0; i < fs.size(); ++i) csv << ",I" << i + 1;
  csv << "\n";
  std::vector<double> energies;
  std::vector<std::vector<double>> values(fs.size());
  for (std::size_t j = 0; j < run.frames.size(); ++j) {
    energies.push_back(cl::energy_shifted(run.frames[j], drift));
    csv << format_double(run.times[j]) << ',' << format_double(energies.back());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      values[i].push_back(cl::functional_If(run.frames[j], fs[i]));
      csv << ',' << format_double(values[i].back());
    }
    csv << "\n";
  }
  cl::write_field_csv(run.frames.back(), opts.out / "field_final.csv");
  out << "shifted energy relative drift " << format_sci(relative_drift(energies)) << "\n";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    out << "I" << i + 1 << " [f = " << fsrc[i] << "] relative drift "
        << format_sci(relative_drift(values[i])) << "\n";
  }
  if (run.diverged) {
    err << "error: run diverged\n";
    return kDiverged;
  }
  return kOk;
}

// ---------------------------------------------------------------- sweep

int sweep_cmd(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  cfg.check_sections({"algebra", "sweep", "run"});
  const FastSlowScenario s = scenario_from_config(cfg, base_dir(opts));
  const double lo = cfg.number_or("sweep", "slope_min", 0.8);
  const double hi = cfg.number_or("sweep", "slope_max", 1.2);

  const SweepResult r = sweep(s);
  std::filesystem::create_directories(opts.out);
  emit_csv(r.records, r.slope, opts.out / "sweep.csv");
  if (cfg.boolean_or("sweep", "svg", false)) {
    auto svg = open_output(opts, "sweep.svg");
    svg << sweep_svg(r.records);
  }
  for (const auto& rec : r.records) {
    out << "epsilon " << format_double(rec.epsilon) << "  max_err " << format_sci(rec.max_err)
        << "  energy_drift " << format_sci(rec.energy_drift) << (rec.diverged ? "  DIVERGED" : "")
        << "\n";
  }
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  bool diverged = false;
  for (const auto& rec : r.records) diverged = diverged || rec.diverged;
  if (r.slope) out << "slope " << format_double(*r.slope) << "\n";
  if (diverged) return kDiverged;
  if (r.left_ball) return kOk;
  if (!r.slope || *r.slope < lo || *r.slope > hi) {
    err << "error: fitted slope " << (r.slope ? format_double(*r.slope) : std::string("n/a"))
        << " outside [" << format_double(lo) << ", " << format_double(hi) << "]\n";
    return kClaimFailed;
  }
  return kOk;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"algebra-check", "avg-rhs", "euler-run",
                                              "reduced-run",   "cl2d",    "sweep"};
  return names;
}

LieAlgebra algebra_from_config(const Config& cfg, const std::filesystem::path& base) {
  cfg.check_keys("algebra", {"name", "file", "N", "sine_inertia", "inertia"});
  if (!cfg.section("algebra")) cfg.fail(0, "missing section [algebra]");
  std::optional<LieAlgebra> A;
  try {
    if (cfg.has("algebra", "file")) {
      if (cfg.has("algebra", "name")) {
        cfg.fail(cfg.line_of("algebra", "file"), "`name` and `file` are exclusive");
      }
      A.emplace(load_algebra(base / cfg.string("algebra", "file")));
    } else {
      BuiltinParams params;
      params.N = static_cast<int>(cfg.integer_or("algebra", "N", 5));
      const std::string si = cfg.string_or("algebra", "sine_inertia", "identity");
      if (si == "laplacian") {
        params.sine_inertia = SineInertia::Laplacian;
      } else if (si != "identity") {
        cfg.fail(cfg.line_of("algebra", "sine_inertia"), "sine_inertia must be identity or laplacian");
      }
      A.emplace(builtin_algebra(cfg.string("algebra", "name"), params));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    cfg.fail(cfg.line_of("algebra", cfg.has("algebra", "file") ? "file" : "name"), e.what());
  }
  if (cfg.has("algebra", "inertia")) {
    const int n = A->dim();
    const auto v = cfg.numbers("algebra", "inertia");
    Eigen::MatrixXd I;
    if (static_cast<int>(v.size()) == n) {
      I = Eigen::Map<const Eigen::VectorXd>(v.data(), n).asDiagonal();
    } else if (static_cast<int>(v.size()) == n * n) {
      I = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          v.data(), n, n);
    } else {
      cfg.fail(cfg.line_of("algebra", "inertia"),
               "`inertia` needs " + std::to_string(n) + " or " + std::to_string(n * n) + " entries");
    }
    try {
      return A->with_inertia(I);
    } catch (const std::exception& e) {
      cfg.fail(cfg.line_of("algebra", "inertia"), e.what());
    }
  }
  return *A;
}

FastSlowScenario scenario_from_config(const Config& cfg, const std::filesystem::path& base) {
  cfg.check_keys("sweep", {"v1", "m_init", "epsilons", "T", "steps_per_period", "K", "slow_steps",
                           "ball_radius", "slope_min", "slope_max", "svg"});
  if (!cfg.section("sweep")) cfg.fail(0, "missing section [sweep]");
  const LieAlgebra A = algebra_from_config(cfg, base);
  const int n = A.dim();
  FastSlowScenario s{A,
                     expressions(cfg, "sweep", "v1", {"t"}),
                     {vector_of(cfg, "sweep", "m_init", n)},
                     cfg.numbers("sweep", "epsilons")};
  s.T = positive(cfg, "sweep", "T", 5.0);
  s.steps_per_period = positive_int(cfg, "sweep", "steps_per_period", 256);
  s.K = positive_int(cfg, "sweep", "K", 256);
  s.slow_steps = positive_int(cfg, "sweep", "slow_steps", 4096);
  s.ball_radius = cfg.number_or("sweep", "ball_radius", std::numeric_limits<double>::infinity());
  if (static_cast<int>(s.v1.size()) != n) {
    cfg.fail(cfg.line_of("sweep", "v1"), "`v1` needs " + std::to_string(n) + " components");
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    cfg.fail(cfg.line_of("sweep", "epsilons"), e.what());
  }
  return s;
}

int run(const std::string& subcommand, const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const Config cfg = Config::load(opts.config);
    if (subcommand == "algebra-check") return algebra_check(cfg, opts, out, err);
    if (subcommand == "avg-rhs") return avg_rhs(cfg, opts, out, err);
    if (subcommand == "euler-run") return euler_run(cfg, opts, out, err);
    if (subcommand == "reduced-run") return reduced_run(cfg, opts, out, err);
    if (subcommand == "cl2d") return cl2d(cfg, opts, out, err);
    if (subcommand == "sweep") return sweep_cmd(cfg, opts, out, err);
    err << "error: unknown subcommand `" << subcommand << "`\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << opts.config.string() << ": " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace lieavg::cli

#include "lieavg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>

#include "lieavg/numfmt.hpp"

namespace lieavg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format17(double x) {
  if (!std::isfinite(x)) return format_double(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

void FastSlowScenario::validate() const {
  const int n = algebra.dim();
  if (static_cast<int>(v1.size()) != n) {
    throw std::invalid_argument("scenario: v1 needs " + std::to_string(n) + " components");
  }
  if (m_init.size() != n) throw std::invalid_argument("scenario: m_init has wrong dimension");
  if (!(T > 0.0)) throw std::invalid_argument("scenario: T must be positive");
  if (steps_per_period < 1 || K < 16 || slow_steps < 1) {
    throw std::invalid_argument("scenario: steps_per_period >= 1, K >= 16, slow_steps >= 1");
  }
  std::set<double> seen;
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("scenario: epsilons must lie in (0, 1)");
    if (!seen.insert(e).second) throw std::invalid_argument("scenario: epsilons must be distinct");
  }
  const Eigen::VectorXd mean = periodic_mean(profile());
  if (mean.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("scenario: v1 must have zero mean over a period");
  }
}

OscillationProfile FastSlowScenario::profile() const {
  return OscillationProfile::from_expressions(v1, K);
}

AlgebraElement FastSlowScenario::drift() const { return drift_vector(algebra, profile()); }

double shifted_energy(const LieAlgebra& A, const AlgebraElement& V, const DualElement& mu) {
  const Eigen::VectorXd a = mu.coords + A.inertia() * V.coords;
  const Eigen::VectorXd b = A.inertia_inverse() * mu.coords + V.coords;
  return 0.5 * a.dot(b);
}

Trajectory run_fast(const FastSlowScenario& s, double eps) {
  s.validate();
  const LieAlgebra& A = s.algebra;
  const int n = A.dim();
  const std::vector<std::string> names{"t"};
  std::vector<expr::BoundExpression> v1;
  for (const auto& e : s.v1) v1.push_back(e.bind(names));

  const long periods = std::max(1L, static_cast<long>(std::floor(s.T / (kTwoPi * eps * eps))));
  const double dt = kTwoPi / s.steps_per_period;
  const VectorField f = [&](double t, const State& mu) -> State {
    Eigen::VectorXd u = A.inertia_inverse() * mu;
    const double tt[1] = {t};
    for (int i = 0; i < n; ++i) u[i] += eps * v1[static_cast<std::size_t>(i)](tt);
    return -coadjoint(A, {u}, {mu}).coords;
  };
  Trajectory traj = integrate_fixed(f, eps * eps * s.m_init.coords, 0.0,
                                    kTwoPi * static_cast<double>(periods), dt, s.steps_per_period);
  traj.states /= eps * eps;
  return traj;
}

Trajectory run_averaged(const FastSlowScenario& s) {
  s.validate();
  const CentralExtension E = averaging_cocycle(s.algebra, s.drift());
  const VectorField f = [&](double, const State& m) -> State {
    return extended_euler_rhs(E, {m}).coords;
  };
  return integrate_fixed(f, s.m_init.coords, 0.0, s.T, s.T / s.slow_steps, 1);
}

State interpolate_averaged(const FastSlowScenario& sc, const Trajectory& slow, double s) {
  const CentralExtension E = averaging_cocycle(sc.algebra, sc.drift());
  const int last = slow.samples() - 1;
  if (last < 1) return slow.state(0);
  const double h = slow.times[1] - slow.times[0];
  int k = static_cast<int>(std::floor((s - slow.times[0]) / h));
  k = std::clamp(k, 0, last - 1);
  const double t0 = slow.times[static_cast<std::size_t>(k)];
  const double t1 = slow.times[static_cast<std::size_t>(k + 1)];
  const double w = t1 - t0;
  const double u = (s - t0) / w;
  const State y0 = slow.state(k), y1 = slow.state(k + 1);
  const State d0 = extended_euler_rhs(E, {y0}).coords;
  const State d1 = extended_euler_rhs(E, {y1}).coords;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return h00 * y0 + h10 * w * d0 + h01 * y1 + h11 * w * d1;
}

double max_error(const FastSlowScenario& s, const Trajectory& fast, const Trajectory& slow,
                 double eps) {
  const double s_end = slow.times.back();
  double err = 0.0;
  for (int k = 0; k < fast.samples(); ++k) {
    const double sk = eps * eps * fast.times[static_cast<std::size_t>(k)];
    if (sk > s_end * (1.0 + 1e-12)) break;
    const State d = fast.state(k) - interpolate_averaged(s, slow, sk);
    err = std::max(err, s.algebra.energy_norm({d}));
  }
  return err;
}

double adiabatic_drift(const FastSlowScenario& s, const Trajectory& fast) {
  const AlgebraElement V = s.drift();
  const double e0 = shifted_energy(s.algebra, V, {fast.state(0)});
  double d = 0.0;
  for (int k = 1; k < fast.samples(); ++k) {
    d = std::max(d, std::abs(shifted_energy(s.algebra, V, {fast.state(k)}) - e0));
  }
  return d;
}

double adiabatic_report(const FastSlowScenario& s, double eps) {
  return adiabatic_drift(s, run_fast(s, eps));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two points");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SweepResult sweep(const FastSlowScenario& s) {
  s.validate();
  SweepResult result;
  const Trajectory slow = run_averaged(s);
  if (slow.diverged) result.warnings.push_back("averaged run diverged");
  double radius = 0.0;
  for (int k = 0; k < slow.samples(); ++k) {
    radius = std::max(radius, s.algebra.energy_norm({slow.state(k)}));
  }
  if (radius > s.ball_radius) {
    result.left_ball = true;
    result.warnings.push_back("averaged solution left the ball of radius " +
                              format_double(s.ball_radius) + " (max norm " +
                              format_double(radius) + "); claim check skipped");
  }

  std::vector<std::future<SweepRecord>> jobs;
  for (double eps : s.epsilons) {
    jobs.push_back(std::async(std::launch::async, [&s, &slow, eps] {
      SweepRecord r;
      r.epsilon = eps;
      const Trajectory fast = run_fast(s, eps);
      r.diverged = fast.diverged;
      r.max_err = max_error(s, fast, slow, eps);
      r.energy_drift = adiabatic_drift(s, fast);
      return r;
    }));
  }
  for (auto& j : jobs) result.records.push_back(j.get());

  std::vector<double> xs, ys;
  for (const auto& r : result.records) {
    if (!r.diverged && r.max_err > 0.0 && std::isfinite(r.max_err)) {
      xs.push_back(r.epsilon);
      ys.push_back(r.max_err);
    }
  }
  if (xs.size() >= 2) {
    result.slope = loglog_slope(xs, ys);
  } else {
    result.warnings.push_back("fewer than two convergent runs; no slope fitted");
  }
  return result;
}

std::string sweep_csv(const std::vector<SweepRecord>& records, const std::optional<double>& slope) {
  std::string out = "epsilon,max_err,energy_drift,diverged\n";
  for (const auto& r : records) {
    out += format17(r.epsilon) + ',' + format17(r.max_err) + ',' + format17(r.energy_drift) + ',' +
           (r.diverged ? "1" : "0") + '\n';
  }
  if (slope && !records.empty()) out += "# slope=" + format17(*slope) + '\n';
  return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::optional<double>& slope,
              const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << sweep_csv(records, slope);
  if (!f) throw std::runtime_error("I/O error writing " + path.string());
}

SweepCsv parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "epsilon,max_err,energy_drift,diverged") {
    throw std::runtime_error("sweep CSV: unexpected header");
  }
  SweepCsv out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# slope=", 0) == 0) {
      out.slope = parse_double(line.substr(8));
      continue;
    }
    std::stringstream ss(line);
    std::vector<std::string> cols;
    for (std::string tok; std::getline(ss, tok, ',');) cols.push_back(tok);
    if (cols.size() != 4) throw std::runtime_error("sweep CSV: expected 4 columns");
    out.records.push_back({parse_double(cols[0]), parse_double(cols[1]), parse_double(cols[2]),
                           cols[3] == "1"});
  }
  return out;
}

SweepCsv read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_sweep_csv(ss.str());
}

std::string sweep_svg(const std::vector<SweepRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records)
    if (r.max_err > 0.0 && std::isfinite(r.max_err)) pts.emplace_back(std::log10(r.epsilon), std::log10(r.max_err));
  const double W = 480, H = 360, pad = 50;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!pts.empty()) {
    double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y1 = y0 + 1;
    auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
    std::sort(pts.begin(), pts.end());
    svg << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (const auto& [x, y] : pts) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : pts) svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\"/>\n";
  }
  svg << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">log10 epsilon</text>\n"
      << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
      << ")\" text-anchor=\"middle\">log10 max_err</text>\n</svg>\n";
  return svg.str();
}

}  // namespace lieavg

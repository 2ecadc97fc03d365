#include "lieavg/clflow.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lieavg/integrate.hpp"
#include "lieavg/numfmt.hpp"
#include "lieavg/spectral.hpp"

namespace lieavg::cl {

namespace {

using spectral::Complex;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

bool power_of_two(int N) { return N > 0 && (N & (N - 1)) == 0; }

int wavenumber_x(int i, int N) { return i <= N / 2 ? i : i - N; }

// Spectral representation helpers bound to one grid size.
struct Grid {
  int N;
  int H;  // N/2 + 1
  spectral::Fft2d& fft;

  explicit Grid(int n) : N(n), H(n / 2 + 1), fft(spectral::workspace(n)) {}

  std::size_t modes() const { return static_cast<std::size_t>(N) * H; }
  std::size_t points() const { return static_cast<std::size_t>(N) * N; }

  std::vector<Complex> forward(std::span<const double> f) const {
    std::vector<Complex> c(modes());
    fft.forward(f, c);
    return c;
  }
  std::vector<double> inverse(std::span<const Complex> c) const {
    std::vector<double> f(points());
    fft.inverse(c, f);
    return f;
  }
  bool nyquist(int i, int j) const { return i == N / 2 || j == N / 2; }
  bool kept(int i, int j) const {
    const int kmax = N / 3;
    return std::abs(wavenumber_x(i, N)) <= kmax && j <= kmax;
  }
};

// Velocity coefficients from vorticity coefficients: v̂ = i k⊥ ω̂ / |k|².
void velocity_modes(const Grid& g, const std::vector<Complex>& w, std::vector<Complex>& vx,
                    std::vector<Complex>& vy) {
  vx.assign(g.modes(), 0.0);
  vy.assign(g.modes(), 0.0);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.H; ++j) {
      if (g.nyquist(i, j) || (i == 0 && j == 0)) continue;
      const double kx = wavenumber_x(i, g.N), ky = j;
      const std::size_t m = static_cast<std::size_t>(i) * g.H + j;
      const Complex psi = w[m] / (kx * kx + ky * ky);
      vx[m] = -kI * ky * psi;
      vy[m] = kI * kx * psi;
    }
}

std::vector<double> rhs_values(const Grid& g, std::span<const double> omega, const StokesDrift& d) {
  std::vector<Complex> w = g.forward(omega);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.H; ++j)
      if (!g.kept(i, j)) w[static_cast<std::size_t>(i) * g.H + j] = 0.0;

  std::vector<Complex> vx, vy;
  velocity_modes(g, w, vx, vy);
  std::vector<Complex> wx(g.modes()), wy(g.modes());
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.H; ++j) {
      const std::size_t m = static_cast<std::size_t>(i) * g.H + j;
      wx[m] = kI * static_cast<double>(wavenumber_x(i, g.N)) * w[m];
      wy[m] = kI * static_cast<double>(j) * w[m];
    }
  const auto ux = g.inverse(vx), uy = g.inverse(vy), gx = g.inverse(wx), gy = g.inverse(wy);
  std::vector<double> prod(g.points());
  for (std::size_t p = 0; p < prod.size(); ++p) {
    prod[p] = (ux[p] + d.x) * gx[p] + (uy[p] + d.y) * gy[p];
  }
  std::vector<Complex> pc = g.forward(prod);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.H; ++j) {
      const std::size_t m = static_cast<std::size_t>(i) * g.H + j;
      if (!g.kept(i, j)) pc[m] = 0.0;
      pc[m] = -pc[m];
    }
  // The mean of a divergence-form product vanishes identically.
  pc[0] = 0.0;
  return g.inverse(pc);
}

}  // namespace

VorticityField::VorticityField(int N, std::vector<double> values) : N_(N), values_(std::move(values)) {
  if (!power_of_two(N) || N < 16) {
    throw std::invalid_argument("vorticity grid size must be a power of two >= 16, got " +
                                std::to_string(N));
  }
  if (values_.size() != static_cast<std::size_t>(N) * N) {
    throw std::invalid_argument("vorticity field needs N*N values");
  }
  if (std::abs(mean()) >= 1e-12) {
    throw std::invalid_argument("vorticity field must have zero mean (mean " +
                                format_double(mean()) + ")");
  }
}

VorticityField VorticityField::from_expression(const expr::Expression& e, int N) {
  const std::vector<std::string> names{"x", "y"};
  const auto f = e.bind(names);
  std::vector<double> v(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double xy[2] = {kTwoPi * i / N, kTwoPi * j / N};
      v[static_cast<std::size_t>(i) * N + j] = f(xy);
    }
  return VorticityField(N, std::move(v));
}

VorticityField VorticityField::zero(int N) {
  return VorticityField(N, std::vector<double>(static_cast<std::size_t>(N) * N, 0.0));
}

VorticityField VorticityField::random_band_limited(int N, int kmax, std::uint64_t seed,
                                                  double amplitude) {
  std::mt19937_64 rng(seed);
  auto draw = [&] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  std::vector<double> v(static_cast<std::size_t>(N) * N, 0.0);
  for (int kx = -kmax; kx <= kmax; ++kx)
    for (int ky = 0; ky <= kmax; ++ky) {
      if (ky == 0 && kx <= 0) continue;
      if (kx * kx + ky * ky > kmax * kmax) continue;
      const double a = draw(), b = draw();
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          const double phase = kTwoPi * (kx * i + ky * j) / N;
          v[static_cast<std::size_t>(i) * N + j] += a * std::cos(phase) + b * std::sin(phase);
        }
    }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double peak = 0.0;
  for (double& x : v) peak = std::max(peak, std::abs(x -= mean));
  if (peak > 0.0)
    for (double& x : v) x *= amplitude / peak;
  return VorticityField(N, std::move(v));
}

double VorticityField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double VorticityField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double VelocityField::max_speed() const {
  double m = 0.0;
  for (std::size_t p = 0; p < vx.size(); ++p) m = std::max(m, std::hypot(vx[p], vy[p]));
  return m;
}

VelocityField vorticity_to_velocity(const VorticityField& w) {
  const Grid g(w.size());
  const auto c = g.forward(w.values());
  std::vector<Complex> vx, vy;
  velocity_modes(g, c, vx, vy);
  return {w.size(), g.inverse(vx), g.inverse(vy)};
}

double velocity_divergence(const VelocityField& v) {
  const Grid g(v.N);
  const auto cx = g.forward(v.vx), cy = g.forward(v.vy);
  std::vector<Complex> div(g.modes());
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.H; ++j) {
      if (g.nyquist(i, j)) continue;
      const std::size_t m = static_cast<std::size_t>(i) * g.H + j;
      div[m] = kI * static_cast<double>(wavenumber_x(i, g.N)) * cx[m] +
               kI * static_cast<double>(j) * cy[m];
    }
  double r = 0.0;
  for (double d : g.inverse(div)) r = std::max(r, std::abs(d));
  return r;
}

VorticityField cl_vorticity_rhs(const VorticityField& w, const StokesDrift& d) {
  const Grid g(w.size());
  return VorticityField(w.size(), rhs_values(g, w.values(), d));
}

bool cfl_ok(const VorticityField& w, const StokesDrift& d, double dt) {
  const double speed = vorticity_to_velocity(w).max_speed() + std::hypot(d.x, d.y);
  return dt * speed * w.size() / kTwoPi <= 0.5;
}

namespace {

VectorField make_field(const Grid& g, const StokesDrift& d) {
  return [&g, d](double, const State& x) -> State {
    const auto r = rhs_values(g, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), d);
    return Eigen::Map<const State>(r.data(), static_cast<Eigen::Index>(r.size()));
  };
}

}  // namespace

VorticityField cl_step(const VorticityField& w, const StokesDrift& d, double dt) {
  const Grid g(w.size());
  const auto f = make_field(g, d);
  const State x0 = Eigen::Map<const State>(w.values().data(), static_cast<Eigen::Index>(w.values().size()));
  const State x1 = rk4_step(f, x0, 0.0, dt);
  return VorticityField(w.size(), std::vector<double>(x1.data(), x1.data() + x1.size()));
}

ClRun cl_integrate(const VorticityField& w0, const StokesDrift& d, double T, double dt, int stride) {
  if (stride < 1) throw std::invalid_argument("cl_integrate: stride must be >= 1");
  const Grid g(w0.size());
  const auto f = make_field(g, d);
  const long steps = step_count(0.0, T, dt);
  const double h = T / static_cast<double>(steps);

  ClRun run;
  run.cfl_warning = !cfl_ok(w0, d, h);
  run.times.push_back(0.0);
  run.frames.push_back(w0);
  State x = Eigen::Map<const State>(w0.values().data(), static_cast<Eigen::Index>(w0.values().size()));
  for (long k = 1; k <= steps; ++k) {
    x = rk4_step(f, x, static_cast<double>(k - 1) * h, h);
    if (!x.allFinite()) {
      run.diverged = true;
      break;
    }
    if (k % stride == 0 || k == steps) {
      VorticityField frame(w0.size(), std::vector<double>(x.data(), x.data() + x.size()));
      if (!run.cfl_warning && !cfl_ok(frame, d, h)) run.cfl_warning = true;
      run.times.push_back(static_cast<double>(k) * h);
      run.frames.push_back(std::move(frame));
    }
  }
  return run;
}

double functional_If(const VorticityField& w, const expr::Expression& f) {
  const std::vector<std::string> names{"w"};
  const auto fb = f.bind(names);
  double s = 0.0;
  for (double v : w.values()) s += fb(std::span<const double>(&v, 1));
  const double cell = kTwoPi / w.size();
  return cell * cell * s;
}

double energy_shifted(const VorticityField& w, const StokesDrift& d) {
  const VelocityField v = vorticity_to_velocity(w);
  double s = 0.0;
  for (std::size_t p = 0; p < v.vx.size(); ++p) {
    const double a = v.vx[p] + d.x, b = v.vy[p] + d.y;
    s += a * a + b * b;
  }
  const double cell = kTwoPi / w.size();
  return 0.5 * cell * cell * s;
}

VorticityField translate(const VorticityField& w, double a, double b) {
  const Grid g(w.size());
  auto c = g.forward(w.values());
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.H; ++j) {
      const std::size_t m = static_cast<std::size_t>(i) * g.H + j;
      const double phase = -(wavenumber_x(i, g.N) * a + j * b);
      if (g.nyquist(i, j)) {
        c[m] *= std::cos(phase);
      } else {
        c[m] *= Complex(std::cos(phase), std::sin(phase));
      }
    }
  auto v = g.inverse(c);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  return VorticityField(w.size(), std::move(v));
}

void write_field_csv(const VorticityField& w, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# N=" << w.size() << '\n';
  for (int i = 0; i < w.size(); ++i) {
    for (int j = 0; j < w.size(); ++j) {
      if (j) out << ',';
      out << format_double(w(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

VorticityField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("# N=", 0) != 0) throw std::runtime_error("field CSV: missing '# N=' header");
  const int N = std::stoi(line.substr(4));
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(N) * N);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) v.push_back(parse_double(tok));
  }
  return VorticityField(N, std::move(v));
}

}  // namespace lieavg::cl

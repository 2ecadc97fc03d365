#include "lieavg/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lieavg {

namespace {

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

std::size_t idx(int n, int i, int j, int k) {
  return (static_cast<std::size_t>(i) * n + j) * n + k;
}

}  // namespace

double antisymmetry_residual(int n, const std::vector<double>& c) {
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r = std::max(r, std::abs(c[idx(n, i, j, k)] + c[idx(n, j, i, k)]));
  return r;
}

double jacobi_residual(int n, const std::vector<double>& c) {
  // For each (i,j) keep the list of nonzero output indices m of [e_i, e_j].
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        if (const double v = c[idx(n, i, j, m)]; v != 0.0)
          rows[static_cast<std::size_t>(i) * n + j].emplace_back(m, v);

  // [[e_a, e_b], e_k] accumulated into acc (length n).
  auto add_double_bracket = [&](int a, int b, int k, std::vector<double>& acc) {
    for (const auto& [m, v] : rows[static_cast<std::size_t>(a) * n + b])
      for (const auto& [l, w] : rows[static_cast<std::size_t>(m) * n + k])
        acc[static_cast<std::size_t>(l)] += v * w;
  };

  double r = 0.0;
  std::vector<double> acc(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::fill(acc.begin(), acc.end(), 0.0);
        add_double_bracket(i, j, k, acc);
        add_double_bracket(j, k, i, acc);
        add_double_bracket(k, i, j, acc);
        for (double a : acc) r = std::max(r, std::abs(a));
      }
  return r;
}

LieAlgebra::LieAlgebra(std::string name, int n, std::vector<double> c, Eigen::MatrixXd inertia)
    : name_(std::move(name)), n_(n), c_(std::move(c)), inertia_(std::move(inertia)) {
  if (n_ <= 0) throw std::invalid_argument("algebra dimension must be positive");
  if (c_.size() != static_cast<std::size_t>(n_) * n_ * n_) {
    throw std::invalid_argument("structure constant array must have n^3 entries");
  }
  if (inertia_.rows() != n_ || inertia_.cols() != n_) {
    throw std::invalid_argument("inertia must be n x n");
  }
  if (const double r = antisymmetry_residual(n_, c_); r != 0.0) {
    throw std::invalid_argument("structure constants are not antisymmetric (residual " +
                                std::to_string(r) + ")");
  }
  double cmax = 0.0;
  for (double v : c_) cmax = std::max(cmax, std::abs(v));
  if (const double r = jacobi_residual(n_, c_); r > 1e-12 * std::max(1.0, cmax * cmax)) {
    throw std::invalid_argument("structure constants violate the Jacobi identity (residual " +
                                std::to_string(r) + ")");
  }
  if ((inertia_ - inertia_.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("inertia operator must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inertia_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("inertia operator must be positive definite");
  }
  inertia_inv_ = inertia_.llt().solve(Eigen::MatrixXd::Identity(n_, n_));
  inertia_inv_ = 0.5 * (inertia_inv_ + inertia_inv_.transpose()).eval();

  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (const double v = this->c(i, j, k); v != 0.0) nonzero_.push_back({i, j, k, v});
}

DualElement LieAlgebra::apply_inertia(const AlgebraElement& X) const {
  require_dim(n_, X.size(), "apply_inertia");
  return {inertia_ * X.coords};
}

AlgebraElement LieAlgebra::velocity(const DualElement& m) const {
  require_dim(n_, m.size(), "velocity");
  return {inertia_inv_ * m.coords};
}

LieAlgebra LieAlgebra::with_inertia(const Eigen::MatrixXd& inertia) const {
  return LieAlgebra(name_, n_, c_, inertia);
}

double LieAlgebra::energy_norm(const DualElement& mu) const {
  require_dim(n_, mu.size(), "energy_norm");
  return std::sqrt(std::max(0.0, mu.coords.dot(inertia_inv_ * mu.coords)));
}

AlgebraElement bracket(const LieAlgebra& A, const AlgebraElement& X, const AlgebraElement& Y) {
  require_dim(A.dim(), X.size(), "bracket");
  require_dim(A.dim(), Y.size(), "bracket");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.dim());
  for (const auto& e : A.nonzero()) z[e.k] += e.value * X.coords[e.i] * Y.coords[e.j];
  return {z};
}

double pairing(const DualElement& mu, const AlgebraElement& X) {
  require_dim(mu.size(), X.size(), "pairing");
  return mu.coords.dot(X.coords);
}

DualElement coadjoint(const LieAlgebra& A, const AlgebraElement& X, const DualElement& mu) {
  require_dim(A.dim(), X.size(), "coadjoint");
  require_dim(A.dim(), mu.size(), "coadjoint");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(A.dim());
  for (const auto& e : A.nonzero()) out[e.j] += X.coords[e.i] * e.value * mu.coords[e.k];
  return {out};
}

DualElement euler_rhs(const LieAlgebra& A, const DualElement& m) {
  return {-coadjoint(A, A.velocity(m), m).coords};
}

DualElement lie_poisson_rhs(const LieAlgebra& A, const expr::Expression& H, const DualElement& m) {
  const int n = A.dim();
  require_dim(n, m.size(), "lie_poisson_rhs");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("m" + std::to_string(i + 1));
  const auto h = H.bind(names);

  std::vector<double> x(m.coords.data(), m.coords.data() + n);
  Eigen::VectorXd grad(n);
  for (int i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    const double step = std::max(1e-6, 1e-6 * std::abs(xi));
    x[static_cast<std::size_t>(i)] = xi + step;
    const double fp = h(x);
    x[static_cast<std::size_t>(i)] = xi - step;
    const double fm = h(x);
    x[static_cast<std::size_t>(i)] = xi;
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return coadjoint(A, {grad}, m);
}

double CentralExtension::cocycle(const AlgebraElement& X, const AlgebraElement& Y) const {
  require_dim(base.dim(), X.size(), "cocycle");
  require_dim(base.dim(), Y.size(), "cocycle");
  return X.coords.dot(W * Y.coords);
}

double CentralExtension::cocycle_identity_residual() const {
  const int n = base.dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto X = AlgebraElement::basis(n, i);
        const auto Y = AlgebraElement::basis(n, j);
        const auto Z = AlgebraElement::basis(n, k);
        const double s = cocycle(bracket(base, X, Y), Z) + cocycle(bracket(base, Y, Z), X) +
                         cocycle(bracket(base, Z, X), Y);
        r = std::max(r, std::abs(s));
      }
  return r;
}

double CentralExtension::antisymmetry_residual() const {
  return (W + W.transpose()).cwiseAbs().maxCoeff();
}

CentralExtension averaging_cocycle(const LieAlgebra& A, const AlgebraElement& V0) {
  require_dim(A.dim(), V0.size(), "averaging_cocycle");
  const int n = A.dim();
  const DualElement IV = A.apply_inertia(V0);
  Eigen::MatrixXd W(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      W(i, j) = -pairing(IV, bracket(A, AlgebraElement::basis(n, i), AlgebraElement::basis(n, j)));
  return {A, W, V0};
}

DualElement extended_coadjoint(const CentralExtension& E, const AlgebraElement& X, double b,
                               const DualElement& m) {
  DualElement out = coadjoint(E.base, X, m);
  out.coords += b * (E.W.transpose() * X.coords);
  return out;
}

DualElement extended_euler_rhs(const CentralExtension& E, const DualElement& m) {
  require_dim(E.base.dim(), m.size(), "extended_euler_rhs");
  const AlgebraElement u{E.base.velocity(m).coords + E.drift.coords};
  return {-coadjoint(E.base, u, m).coords};
}

namespace {

std::vector<double> zeros_cube(int n) {
  return std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0);
}

int reduce_symmetric(int v, int N) {
  const int h = (N - 1) / 2;
  v %= N;
  if (v < 0) v += N;
  if (v > h) v -= N;
  return v;
}

}  // namespace

std::pair<int, int> sine_mode(int N, int index) {
  const int h = (N - 1) / 2;
  int count = 0;
  for (int a = -h; a <= h; ++a)
    for (int b = -h; b <= h; ++b) {
      if (a == 0 && b == 0) continue;
      if (count == index) return {a, b};
      ++count;
    }
  throw std::out_of_range("sine_mode index out of range");
}

LieAlgebra builtin_algebra(std::string_view name, const BuiltinParams& params) {
  if (name == "so3") {
    auto c = zeros_cube(3);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const int k = (i + 2) % 3;
      c[idx(3, i, j, k)] = 1.0;
      c[idx(3, j, i, k)] = -1.0;
    }
    return LieAlgebra("so3", 3, std::move(c), Eigen::MatrixXd::Identity(3, 3));
  }
  if (name == "heisenberg3") {
    auto c = zeros_cube(3);
    c[idx(3, 0, 1, 2)] = 1.0;
    c[idx(3, 1, 0, 2)] = -1.0;
    return LieAlgebra("heisenberg3", 3, std::move(c), Eigen::MatrixXd::Identity(3, 3));
  }
  if (name == "sine_truncated") {
    const int N = params.N;
    if (N < 3 || N % 2 == 0) {
      throw std::invalid_argument("sine_truncated requires odd N >= 3, got " + std::to_string(N));
    }
    const int h = (N - 1) / 2;
    const int n = N * N - 1;
    // Map a reduced wave vector to its basis index.
    auto index_of = [&](int a, int b) {
      int flat = (a + h) * N + (b + h);
      const int zero = h * N + h;
      return flat > zero ? flat - 1 : flat;
    };
    auto c = zeros_cube(n);
    const double scale = N / (2.0 * std::numbers::pi);
    for (int p = 0; p < n; ++p) {
      const auto [m1, m2] = sine_mode(N, p);
      for (int q = 0; q < n; ++q) {
        const auto [n1, n2] = sine_mode(N, q);
        const int s1 = reduce_symmetric(m1 + n1, N);
        const int s2 = reduce_symmetric(m2 + n2, N);
        if (s1 == 0 && s2 == 0) continue;
        const int cross = m1 * n2 - m2 * n1;
        // Reduce the cross product mod N before taking the sine so that
        // antisymmetric pairs are exact negatives of each other.
        const int reduced = reduce_symmetric(cross, N);
        const double v = scale * std::sin(2.0 * std::numbers::pi * reduced / N);
        if (reduced != 0) c[idx(n, p, q, index_of(s1, s2))] = v;
      }
    }
    Eigen::MatrixXd inertia = Eigen::MatrixXd::Identity(n, n);
    if (params.sine_inertia == SineInertia::Laplacian) {
      for (int p = 0; p < n; ++p) {
        const auto [a, b] = sine_mode(N, p);
        inertia(p, p) = static_cast<double>(a * a + b * b);
      }
    }
    return LieAlgebra("sine_truncated(" + std::to_string(N) + ")", n, std::move(c), inertia);
  }
  throw std::invalid_argument("unknown algebra '" + std::string(name) + "'");
}

RawAlgebra parse_algebra_raw(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.empty() || lines[0].size() != 1) {
    throw std::invalid_argument("algebra file: first line must hold the dimension n");
  }
  RawAlgebra raw;
  raw.n = std::stoi(lines[0][0]);
  const int n = raw.n;
  if (n <= 0) throw std::invalid_argument("algebra file: dimension must be positive");
  if (lines.size() < static_cast<std::size_t>(n) + 1) {
    throw std::invalid_argument("algebra file: missing inertia matrix rows");
  }
  const std::size_t first_inertia = lines.size() - static_cast<std::size_t>(n);
  raw.c = zeros_cube(n);
  std::vector<char> listed(raw.c.size(), 0);
  for (std::size_t l = 1; l < first_inertia; ++l) {
    const auto& t = lines[l];
    if (t.size() != 4) {
      throw std::invalid_argument("algebra file: structure constant line must be 'i j k value'");
    }
    const int i = std::stoi(t[0]), j = std::stoi(t[1]), k = std::stoi(t[2]);
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) {
      throw std::invalid_argument("algebra file: index out of range");
    }
    const double v = std::stod(t[3]);
    const auto a = idx(n, i, j, k), b = idx(n, j, i, k);
    raw.c[a] = v;
    listed[a] = 1;
    if (!listed[b]) raw.c[b] = -v;
  }
  raw.inertia.resize(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& t = lines[first_inertia + static_cast<std::size_t>(r)];
    if (t.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("algebra file: inertia row must have n entries");
    }
    for (int col = 0; col < n; ++col) raw.inertia(r, col) = std::stod(t[static_cast<std::size_t>(col)]);
  }
  return raw;
}

LieAlgebra parse_algebra(std::string_view text, const std::string& name) {
  RawAlgebra raw = parse_algebra_raw(text);
  return LieAlgebra(name, raw.n, std::move(raw.c), std::move(raw.inertia));
}

LieAlgebra load_algebra(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open algebra file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_algebra(ss.str(), path.stem().string());
}

}  // namespace lieavg

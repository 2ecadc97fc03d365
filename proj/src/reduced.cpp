#include "lieavg/reduced.hpp"

#include <cmath>
#include <stdexcept>

namespace lieavg {

namespace {

double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

std::vector<std::string> q_names(int k) {
  std::vector<std::string> names;
  for (int u = 0; u < k; ++u) names.push_back("q" + std::to_string(u + 1));
  return names;
}

}  // namespace

State ReducedState::flatten() const {
  State x(q.size() + p.size() + mu.size());
  x << q, p, mu.coords;
  return x;
}

ReducedState ReducedState::unflatten(const State& x, int k, int n) {
  if (x.size() != 2 * k + n) throw DimensionError("ReducedState::unflatten: size mismatch");
  return {x.segment(0, k), x.segment(k, k), {x.segment(2 * k, n)}};
}

State ReducedDerivative::flatten() const {
  State x(dq.size() + dp.size() + dmu.size());
  x << dq, dp, dmu.coords;
  return x;
}

std::vector<std::string> reduced_variable_names(int k, int n) {
  std::vector<std::string> names = q_names(k);
  for (int u = 0; u < k; ++u) names.push_back("p" + std::to_string(u + 1));
  for (int a = 0; a < n; ++a) names.push_back("m" + std::to_string(a + 1));
  return names;
}

ConnectionSpec::ConnectionSpec(int k, int n, std::vector<expr::Expression> atilde,
                               expr::Expression potential,
                               std::optional<std::vector<expr::Expression>> omega)
    : k_(k), n_(n), qnames_(q_names(k)) {
  if (k < 1 || n < 1) throw std::invalid_argument("ConnectionSpec: dimensions must be positive");
  if (atilde.size() != static_cast<std::size_t>(n) * k) {
    throw std::invalid_argument("ConnectionSpec: Atilde needs n*k = " + std::to_string(n * k) +
                                " entries, got " + std::to_string(atilde.size()));
  }
  for (const auto& e : atilde) atilde_.push_back(e.bind(qnames_));
  potential_ = potential.bind(qnames_);
  if (omega) {
    if (omega->size() != static_cast<std::size_t>(k) * k * n) {
      throw std::invalid_argument("ConnectionSpec: Omega needs k*k*n = " +
                                  std::to_string(k * k * n) + " entries, got " +
                                  std::to_string(omega->size()));
    }
    std::vector<expr::BoundExpression> b;
    for (const auto& e : *omega) b.push_back(e.bind(qnames_));
    omega_ = std::move(b);
    // Spot-check antisymmetry at a few base points.
    for (double probe : {0.0, 0.37, -1.3}) {
      const Eigen::VectorXd q = Eigen::VectorXd::Constant(k, probe);
      try {
        for (int u = 0; u < k; ++u)
          for (int v = 0; v < k; ++v) {
            const double r = (this->omega(q, u, v) + this->omega(q, v, u)).cwiseAbs().maxCoeff();
            if (r > 1e-12) {
              throw std::invalid_argument("ConnectionSpec: Omega is not antisymmetric in (u, v)");
            }
          }
      } catch (const expr::EvalError&) {
        // Probe point outside the expressions' domain.
      }
    }
  }
}

ConnectionSpec ConnectionSpec::flat(int k, int n) {
  std::vector<expr::Expression> a(static_cast<std::size_t>(n) * k, expr::Expression::constant(0.0));
  return ConnectionSpec(k, n, std::move(a), expr::Expression::constant(0.0));
}

Eigen::MatrixXd ConnectionSpec::atilde(const Eigen::VectorXd& q) const {
  if (q.size() != k_) throw DimensionError("ConnectionSpec::atilde: q has wrong size");
  const std::span<const double> qs(q.data(), static_cast<std::size_t>(k_));
  Eigen::MatrixXd m(n_, k_);
  for (int a = 0; a < n_; ++a)
    for (int u = 0; u < k_; ++u) m(a, u) = atilde_[static_cast<std::size_t>(a * k_ + u)](qs);
  return m;
}

double ConnectionSpec::potential(const Eigen::VectorXd& q) const {
  if (q.size() != k_) throw DimensionError("ConnectionSpec::potential: q has wrong size");
  return potential_(std::span<const double>(q.data(), static_cast<std::size_t>(k_)));
}

Eigen::VectorXd ConnectionSpec::potential_gradient(const Eigen::VectorXd& q) const {
  Eigen::VectorXd g(k_);
  Eigen::VectorXd x = q;
  for (int u = 0; u < k_; ++u) {
    const double h = fd_step(q[u]);
    x[u] = q[u] + h;
    const double fp = potential(x);
    x[u] = q[u] - h;
    const double fm = potential(x);
    x[u] = q[u];
    g[u] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd ConnectionSpec::omega(const Eigen::VectorXd& q, int u, int v) const {
  if (!omega_) throw std::logic_error("ConnectionSpec::omega: no curvature declared");
  const std::span<const double> qs(q.data(), static_cast<std::size_t>(k_));
  Eigen::VectorXd w(n_);
  for (int a = 0; a < n_; ++a) w[a] = (*omega_)[static_cast<std::size_t>((u * k_ + v) * n_ + a)](qs);
  return w;
}

AlgebraElement curvature_from_connection(const ConnectionSpec& spec, const LieAlgebra& A,
                                         const Eigen::VectorXd& q, int u, int v) {
  const int k = spec.base_dim();
  if (u < 0 || v < 0 || u >= k || v >= k) throw std::out_of_range("curvature: index out of range");
  if (A.dim() != spec.algebra_dim()) throw DimensionError("curvature: algebra dimension mismatch");
  const double h = 1e-6 * std::max(1.0, q.norm());
  auto partial = [&](int dir, int col) -> Eigen::VectorXd {
    Eigen::VectorXd qp = q, qm = q;
    qp[dir] += h;
    qm[dir] -= h;
    return (spec.atilde(qp).col(col) - spec.atilde(qm).col(col)) / (2.0 * h);
  };
  const Eigen::MatrixXd a = spec.atilde(q);
  Eigen::VectorXd out = partial(u, v) - partial(v, u);
  out += bracket(A, {a.col(u)}, {a.col(v)}).coords;
  return {out};
}

Eigen::VectorXd curvature(const ConnectionSpec& spec, const LieAlgebra& A,
                          const Eigen::VectorXd& q, int u, int v) {
  if (spec.has_omega()) return spec.omega(q, u, v);
  return curvature_from_connection(spec, A, q, u, v).coords;
}

std::optional<double> curvature_discrepancy(const ConnectionSpec& spec, const LieAlgebra& A,
                                            const Eigen::VectorXd& q) {
  if (!spec.has_omega()) return std::nullopt;
  double r = 0.0;
  for (int u = 0; u < spec.base_dim(); ++u)
    for (int v = 0; v < spec.base_dim(); ++v) {
      if (u == v) continue;
      const Eigen::VectorXd d = spec.omega(q, u, v) - curvature_from_connection(spec, A, q, u, v).coords;
      r = std::max(r, d.cwiseAbs().maxCoeff());
    }
  return r;
}

double natural_hamiltonian(const LieAlgebra& A, const ConnectionSpec& spec, const ReducedState& s) {
  return 0.5 * s.p.squaredNorm() + 0.5 * s.mu.coords.dot(A.inertia_inverse() * s.mu.coords) +
         spec.potential(s.q);
}

namespace {

// Shared assembly of Hamilton's equations given the three functional derivatives.
ReducedDerivative assemble(const LieAlgebra& A, const ConnectionSpec& spec, const ReducedState& s,
                           const Eigen::VectorXd& dH_dq, const Eigen::VectorXd& dH_dp,
                           const AlgebraElement& dH_dmu) {
  const int k = spec.base_dim();
  const Eigen::MatrixXd a = spec.atilde(s.q);

  ReducedDerivative d;
  d.dq = dH_dp;
  const AlgebraElement drive{dH_dmu.coords - a * dH_dp};
  d.dmu = DualElement{-coadjoint(A, drive, s.mu).coords};

  const DualElement ad_mu = coadjoint(A, dH_dmu, s.mu);
  Eigen::VectorXd omega_star = Eigen::VectorXd::Zero(k);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      if (u == v || dH_dp[v] == 0.0) continue;
      omega_star[u] += dH_dp[v] * s.mu.coords.dot(curvature(spec, A, s.q, v, u));
    }
  d.dp = -dH_dq + a.transpose() * ad_mu.coords - omega_star;
  return d;
}

void check_state(const LieAlgebra& A, const ConnectionSpec& spec, const ReducedState& s) {
  if (A.dim() != spec.algebra_dim() || s.mu.size() != A.dim() || s.q.size() != spec.base_dim() ||
      s.p.size() != spec.base_dim()) {
    throw DimensionError("reduced system: state dimensions do not match the scenario");
  }
}

}  // namespace

ReducedDerivative natural_reduced_rhs(const LieAlgebra& A, const ConnectionSpec& spec,
                                      const ReducedState& s) {
  check_state(A, spec, s);
  return assemble(A, spec, s, spec.potential_gradient(s.q), s.p, A.velocity(s.mu));
}

ReducedDerivative generic_reduced_rhs(const LieAlgebra& A, const ConnectionSpec& spec,
                                      const expr::Expression& H, const ReducedState& s) {
  check_state(A, spec, s);
  const int k = spec.base_dim();
  const int n = A.dim();
  const auto names = reduced_variable_names(k, n);
  const auto h = H.bind(names);
  State x = s.flatten();
  State grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double step = fd_step(xi);
    x[i] = xi + step;
    const double fp = h(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    x[i] = xi - step;
    const double fm = h(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    x[i] = xi;
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return assemble(A, spec, s, grad.segment(0, k), grad.segment(k, k), {grad.segment(2 * k, n)});
}

}  // namespace lieavg

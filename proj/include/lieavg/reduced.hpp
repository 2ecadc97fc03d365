#pragma once

// Hamiltonian dynamics on the local reduced space T*U x g* of a principal
// bundle, with a user-declared connection Ã_q : T_qU -> g, curvature
// Ω̃_q(·,·) and potential V(q). Expressions use the variables q1..qk (and
// p1..pk, m1..mn for a general Hamiltonian).

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "lieavg/algebra.hpp"
#include "lieavg/expr.hpp"
#include "lieavg/integrate.hpp"

namespace lieavg {

struct ReducedState {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  DualElement mu;

  /// (q, p, mu) stacked for the integrator.
  State flatten() const;
  static ReducedState unflatten(const State& x, int k, int n);
};

struct ReducedDerivative {
  Eigen::VectorXd dq;
  Eigen::VectorXd dp;
  DualElement dmu;

  State flatten() const;
};

class ConnectionSpec {
 public:
  /// `atilde` is n x k, row-major: atilde[a*k + u] is the a-th coordinate of
  /// Ã(e_u). `omega`, when given, is k x k x n with omega[(u*k + v)*n + a] the
  /// a-th coordinate of Ω̃(e_u, e_v); it must be antisymmetric in (u, v).
  ConnectionSpec(int k, int n, std::vector<expr::Expression> atilde, expr::Expression potential,
                 std::optional<std::vector<expr::Expression>> omega = std::nullopt);

  int base_dim() const { return k_; }
  int algebra_dim() const { return n_; }
  bool has_omega() const { return omega_.has_value(); }

  /// n x k matrix of Ã_q.
  Eigen::MatrixXd atilde(const Eigen::VectorXd& q) const;
  double potential(const Eigen::VectorXd& q) const;
  /// Central-difference gradient of V, step 1e-6 * max(1, |q_u|).
  Eigen::VectorXd potential_gradient(const Eigen::VectorXd& q) const;
  /// Declared Ω̃_q(e_u, e_v). Requires has_omega().
  Eigen::VectorXd omega(const Eigen::VectorXd& q, int u, int v) const;

  /// Zero connection and potential (trivial bundle).
  static ConnectionSpec flat(int k, int n);

 private:
  int k_, n_;
  std::vector<expr::BoundExpression> atilde_;
  expr::BoundExpression potential_;
  std::optional<std::vector<expr::BoundExpression>> omega_;
  std::vector<std::string> qnames_;
};

/// ∂_u Ã(e_v) - ∂_v Ã(e_u) + [Ã(e_u), Ã(e_v)], partials by central
/// differences with step 1e-6 * max(1, |q|).
AlgebraElement curvature_from_connection(const ConnectionSpec& spec, const LieAlgebra& A,
                                         const Eigen::VectorXd& q, int u, int v);

/// Ω̃_q(e_u, e_v): declared if available, else derived from Ã.
Eigen::VectorXd curvature(const ConnectionSpec& spec, const LieAlgebra& A,
                          const Eigen::VectorXd& q, int u, int v);

/// Largest |declared Ω̃ - derived Ω̃| over all (u, v) at q, or nullopt when no
/// curvature is declared.
std::optional<double> curvature_discrepancy(const ConnectionSpec& spec, const LieAlgebra& A,
                                            const Eigen::VectorXd& q);

/// H = ½|p|² + ½<mu, 𝕀^{-1} mu> + V(q) with a Euclidean base metric.
double natural_hamiltonian(const LieAlgebra& A, const ConnectionSpec& spec, const ReducedState& s);

/// Hamilton's equations for the natural Hamiltonian:
///   mu' = -ad*_{𝕀^{-1}mu - Ã_q p} mu
///   p'  = -∇V + Ã_q^* ad*_{𝕀^{-1}mu} mu - Ω̃_{q,p}^* mu
///   q'  = p
ReducedDerivative natural_reduced_rhs(const LieAlgebra& A, const ConnectionSpec& spec,
                                      const ReducedState& s);

/// Hamilton's equations for a general H(q, p, m) with all functional
/// derivatives by central differences (relative step 1e-6).
ReducedDerivative generic_reduced_rhs(const LieAlgebra& A, const ConnectionSpec& spec,
                                      const expr::Expression& H, const ReducedState& s);

/// Variable names q1..qk, p1..pk, m1..mn in that order.
std::vector<std::string> reduced_variable_names(int k, int n);

}  // namespace lieavg

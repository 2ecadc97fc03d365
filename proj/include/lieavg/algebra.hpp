#pragma once

// Finite-dimensional Lie algebras in a fixed basis {e_i}: brackets,
// the natural pairing with the dual, coadjoint actions, inertia operators,
// the averaging 2-cocycle and Euler-equation right-hand sides.
//
// Convention: the coadjoint action is defined by
//   <ad*_X mu, Y> = <mu, [X, Y]>   for all Y,
// so in coordinates (ad*_X mu)_j = sum_{i,k} X_i c[i][j][k] mu_k.

#include <Eigen/Core>
#include <Eigen/Dense>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lieavg/expr.hpp"

namespace lieavg {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of the algebra g, coordinates in the basis {e_i}.
struct AlgebraElement {
  Eigen::VectorXd coords;

  static AlgebraElement zero(int n) { return {Eigen::VectorXd::Zero(n)}; }
  static AlgebraElement basis(int n, int i) { return {Eigen::VectorXd::Unit(n, i)}; }
  int size() const { return static_cast<int>(coords.size()); }
};

/// Element of the dual g*, coordinates in the dual basis {e_i*}.
struct DualElement {
  Eigen::VectorXd coords;

  static DualElement zero(int n) { return {Eigen::VectorXd::Zero(n)}; }
  static DualElement basis(int n, int i) { return {Eigen::VectorXd::Unit(n, i)}; }
  int size() const { return static_cast<int>(coords.size()); }
};

/// Nonzero structure constant c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k.
struct StructureEntry {
  int i, j, k;
  double value;
};

/// Max over (i,j,k,l) of |sum_m c_ij^m c_mk^l + cyclic|. Dense c is n^3, row-major.
double jacobi_residual(int n, const std::vector<double>& c);

/// Max over (i,j,k) of |c[i][j][k] + c[j][i][k]|.
double antisymmetry_residual(int n, const std::vector<double>& c);

class LieAlgebra {
 public:
  /// `c` holds n^3 entries, c[(i*n + j)*n + k]. Throws std::invalid_argument
  /// unless c is antisymmetric, satisfies Jacobi (1e-12 relative to max|c|^2)
  /// and the inertia is symmetric positive definite.
  LieAlgebra(std::string name, int n, std::vector<double> c, Eigen::MatrixXd inertia);

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  double c(int i, int j, int k) const {
    return c_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::vector<double>& structure_constants() const { return c_; }
  const std::vector<StructureEntry>& nonzero() const { return nonzero_; }

  const Eigen::MatrixXd& inertia() const { return inertia_; }
  const Eigen::MatrixXd& inertia_inverse() const { return inertia_inv_; }

  /// 𝕀 : g -> g*
  DualElement apply_inertia(const AlgebraElement& X) const;
  /// 𝕀^{-1} : g* -> g
  AlgebraElement velocity(const DualElement& m) const;

  /// Same structure constants, different inertia.
  LieAlgebra with_inertia(const Eigen::MatrixXd& inertia) const;

  /// Energy norm <mu, 𝕀^{-1} mu>^{1/2}.
  double energy_norm(const DualElement& mu) const;

 private:
  std::string name_;
  int n_;
  std::vector<double> c_;
  std::vector<StructureEntry> nonzero_;
  Eigen::MatrixXd inertia_;
  Eigen::MatrixXd inertia_inv_;
};

AlgebraElement bracket(const LieAlgebra& A, const AlgebraElement& X, const AlgebraElement& Y);
double pairing(const DualElement& mu, const AlgebraElement& X);
DualElement coadjoint(const LieAlgebra& A, const AlgebraElement& X, const DualElement& mu);

/// dm/dt = -ad*_{𝕀^{-1} m} m
DualElement euler_rhs(const LieAlgebra& A, const DualElement& m);

/// dm/dt = ad*_{dH(m)} m with H an expression in m1..mn. The gradient is
/// taken by central differences with step max(1e-6, 1e-6 |m_i|).
DualElement lie_poisson_rhs(const LieAlgebra& A, const expr::Expression& H, const DualElement& m);

/// Central extension of `base` by the cocycle w(X, Y) = X^T W Y. `drift`
/// is the vector V0 that generated W when built by averaging_cocycle.
struct CentralExtension {
  LieAlgebra base;
  Eigen::MatrixXd W;
  AlgebraElement drift;

  double cocycle(const AlgebraElement& X, const AlgebraElement& Y) const;
  /// max |w([X,Y],Z) + w([Y,Z],X) + w([Z,X],Y)| over basis triples.
  double cocycle_identity_residual() const;
  double antisymmetry_residual() const;
};

/// Coboundary w(X, Y) = -<𝕀V0, [X, Y]>. Equals <ad*_{V0} 𝕀X, Y> when 𝕀 is
/// ad-invariant (so3 with identity inertia); unlike that form it is a cocycle
/// for every inertia.
CentralExtension averaging_cocycle(const LieAlgebra& A, const AlgebraElement& V0);

/// g*-part of ad*_{(X,a)} (m, b) in the extension: ad*_X m + b W^T X.
DualElement extended_coadjoint(const CentralExtension& E, const AlgebraElement& X, double b,
                               const DualElement& m);

/// dm/dt = -ad*_{𝕀^{-1}m + V0} m. In the shifted variable m' = m + 𝕀V0 this
/// is the Euler equation on the extended dual at central charge b = 1:
/// -extended_coadjoint(E, 𝕀^{-1}m', 1, m').
DualElement extended_euler_rhs(const CentralExtension& E, const DualElement& m);

/// Inertia choices for the truncated sine-bracket algebra.
enum class SineInertia { Identity, Laplacian };

struct BuiltinParams {
  int N = 5;  // sine_truncated only; odd, >= 3
  SineInertia sine_inertia = SineInertia::Identity;
};

/// so3 | heisenberg3 | sine_truncated. Throws std::invalid_argument.
LieAlgebra builtin_algebra(std::string_view name, const BuiltinParams& params = {});

/// Integer wave vector (m1, m2) of basis element `index` of sine_truncated(N).
std::pair<int, int> sine_mode(int N, int index);

/// Plain-text algebra file: first token n; then `i j k value` lines listing
/// nonzero structure constants (0-based); the final n non-empty lines are
/// the inertia matrix rows. `#` starts a comment. Antisymmetric partners
/// that are not listed are filled in.
LieAlgebra load_algebra(const std::filesystem::path& path);
LieAlgebra parse_algebra(std::string_view text, const std::string& name = "custom");

/// Structure constants and inertia as listed in an algebra file, without the
/// Jacobi check, so diagnostics can report residuals of invalid input.
struct RawAlgebra {
  int n = 0;
  std::vector<double> c;
  Eigen::MatrixXd inertia;
};
RawAlgebra parse_algebra_raw(std::string_view text);

}  // namespace lieavg

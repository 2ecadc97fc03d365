#pragma once

// Two-timing averaging for fast-oscillating bilinear systems
//   dx/dt = B(x, eps*y1(t) + x),
// with y1 a zero-mean 2π-periodic signal sampled on a uniform grid.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "lieavg/algebra.hpp"
#include "lieavg/expr.hpp"

namespace lieavg {

/// One period of a vector signal: row j is y(2πj/K).
class OscillationProfile {
 public:
  explicit OscillationProfile(Eigen::MatrixXd samples);

  /// Sample per-coordinate expressions in the variable t.
  static OscillationProfile from_expressions(const std::vector<expr::Expression>& components,
                                             int K);
  static OscillationProfile from_function(const std::function<Eigen::VectorXd(double)>& f, int n,
                                          int K);

  int samples_per_period() const { return static_cast<int>(samples_.rows()); }
  int dim() const { return static_cast<int>(samples_.cols()); }
  const Eigen::MatrixXd& samples() const { return samples_; }
  Eigen::VectorXd row(int j) const { return samples_.row(j).transpose(); }
  double time(int j) const;

  /// Trigonometric interpolant evaluated at arbitrary t.
  Eigen::VectorXd interpolate(double t) const;

 private:
  Eigen::MatrixXd samples_;
};

/// A bilinear map on R^n given by a callable, with declared bracket-like flags.
struct BilinearOperator {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> fn;
  int dim = 0;
  bool antisymmetric = false;
  bool jacobi = false;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return fn(x, y);
  }
};

/// B(x, y) = -ad*_{𝕀^{-1} y} x, the Euler equation written as dx/dt = B(x, x).
BilinearOperator lie_bilinear(const LieAlgebra& A);

struct FlagCheck {
  double antisymmetry_residual = 0.0;
  double jacobi_residual = 0.0;
  bool passed = false;
};

/// Randomised residuals of B(x,y)+B(y,x) and the Jacobi sum over `triples`
/// draws from the unit cube, relative to the scale of the inputs.
FlagCheck check_bracket_flags(const BilinearOperator& B, std::uint64_t seed, int triples = 100,
                              double tolerance = 1e-10);

/// A bilinear operator that has passed check_bracket_flags. Only obtainable
/// through verify_bracket.
class VerifiedBracket {
 public:
  const BilinearOperator& op() const { return op_; }
  const FlagCheck& check() const { return check_; }

 private:
  friend VerifiedBracket verify_bracket(BilinearOperator, std::uint64_t, int, double);
  VerifiedBracket(BilinearOperator op, FlagCheck c) : op_(std::move(op)), check_(c) {}
  BilinearOperator op_;
  FlagCheck check_;
};

class FlagError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws FlagError when the declared flags are missing or the residual check fails.
VerifiedBracket verify_bracket(BilinearOperator B, std::uint64_t seed, int triples = 100,
                               double tolerance = 1e-10);

Eigen::VectorXd periodic_mean(const OscillationProfile& p);

/// Zero-mean periodic antiderivative, computed spectrally. Throws
/// std::invalid_argument if the input mean exceeds 1e-10.
OscillationProfile oscillating_primitive(const OscillationProfile& p);

/// avg B(B(x, y1^t), y1) + B(x, x), with the average taken by the rectangle
/// rule on the profile grid. Holds the primitive so repeated calls are cheap.
class AveragedField {
 public:
  AveragedField(BilinearOperator B, const OscillationProfile& p);
  Eigen::VectorXd operator()(const Eigen::VectorXd& xbar) const;
  const OscillationProfile& primitive() const { return primitive_; }

 private:
  BilinearOperator B_;
  OscillationProfile profile_;
  OscillationProfile primitive_;
};

Eigen::VectorXd averaged_rhs(const BilinearOperator& B, const OscillationProfile& p,
                             const Eigen::VectorXd& xbar);

/// V0 = avg ½[v, v^τ] computed with the algebra bracket.
AlgebraElement drift_vector(const LieAlgebra& A, const OscillationProfile& p);

/// Shift vector for the shifted averaged form: ½ avg B(y1, y1^t).
Eigen::VectorXd shift_vector(const BilinearOperator& B, const OscillationProfile& p);

/// B(V + x, x).
Eigen::VectorXd shifted_averaged_rhs(const VerifiedBracket& B, const Eigen::VectorXd& V,
                                     const Eigen::VectorXd& xbar);

}  // namespace lieavg

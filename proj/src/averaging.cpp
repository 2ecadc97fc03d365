#include "lieavg/averaging.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "lieavg/spectral.hpp"

namespace lieavg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dim(int expected, long got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}
}  // namespace

OscillationProfile::OscillationProfile(Eigen::MatrixXd samples) : samples_(std::move(samples)) {
  if (samples_.rows() < 1 || samples_.cols() < 1) {
    throw std::invalid_argument("oscillation profile needs at least one sample and coordinate");
  }
}

OscillationProfile OscillationProfile::from_expressions(
    const std::vector<expr::Expression>& components, int K) {
  if (K < 1) throw std::invalid_argument("profile sample count must be positive");
  const std::vector<std::string> names{"t"};
  std::vector<expr::BoundExpression> bound;
  for (const auto& e : components) bound.push_back(e.bind(names));
  Eigen::MatrixXd s(K, static_cast<Eigen::Index>(components.size()));
  for (int j = 0; j < K; ++j) {
    const double t[1] = {kTwoPi * j / K};
    for (std::size_t c = 0; c < bound.size(); ++c) s(j, static_cast<Eigen::Index>(c)) = bound[c](t);
  }
  return OscillationProfile(std::move(s));
}

OscillationProfile OscillationProfile::from_function(
    const std::function<Eigen::VectorXd(double)>& f, int n, int K) {
  if (K < 1) throw std::invalid_argument("profile sample count must be positive");
  Eigen::MatrixXd s(K, n);
  for (int j = 0; j < K; ++j) {
    const Eigen::VectorXd v = f(kTwoPi * j / K);
    require_dim(n, v.size(), "OscillationProfile::from_function");
    s.row(j) = v.transpose();
  }
  return OscillationProfile(std::move(s));
}

double OscillationProfile::time(int j) const { return kTwoPi * j / samples_per_period(); }

Eigen::VectorXd OscillationProfile::interpolate(double t) const {
  const int K = samples_per_period();
  Eigen::VectorXd out(dim());
  for (int c = 0; c < dim(); ++c) {
    const Eigen::VectorXd col = samples_.col(c);
    const auto coef = spectral::rfft(std::span<const double>(col.data(), static_cast<std::size_t>(K)));
    double acc = coef[0].real();
    for (int k = 1; k < static_cast<int>(coef.size()); ++k) {
      const bool nyquist = (K % 2 == 0) && k == K / 2;
      const spectral::Complex phase(std::cos(k * t), std::sin(k * t));
      acc += (nyquist ? 1.0 : 2.0) * (coef[static_cast<std::size_t>(k)] * phase).real();
    }
    out[c] = acc / K;
  }
  return out;
}

BilinearOperator lie_bilinear(const LieAlgebra& A) {
  BilinearOperator B;
  B.dim = A.dim();
  B.fn = [A](const Eigen::VectorXd& x, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return -coadjoint(A, A.velocity({y}), {x}).coords;
  };
  return B;
}

FlagCheck check_bracket_flags(const BilinearOperator& B, std::uint64_t seed, int triples,
                              double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto draw = [&] {
    Eigen::VectorXd v(B.dim);
    for (int i = 0; i < B.dim; ++i) v[i] = unif(rng);
    return v;
  };
  FlagCheck out;
  for (int t = 0; t < triples; ++t) {
    const Eigen::VectorXd x = draw(), y = draw(), z = draw();
    out.antisymmetry_residual =
        std::max(out.antisymmetry_residual, (B(x, y) + B(y, x)).cwiseAbs().maxCoeff());
    const Eigen::VectorXd jac = B(B(x, y), z) + B(B(y, z), x) + B(B(z, x), y);
    out.jacobi_residual = std::max(out.jacobi_residual, jac.cwiseAbs().maxCoeff());
  }
  out.passed = out.antisymmetry_residual < tolerance && out.jacobi_residual < tolerance;
  return out;
}

VerifiedBracket verify_bracket(BilinearOperator B, std::uint64_t seed, int triples,
                               double tolerance) {
  if (!B.antisymmetric || !B.jacobi) {
    throw FlagError("bilinear operator does not declare antisymmetry and Jacobi");
  }
  const FlagCheck c = check_bracket_flags(B, seed, triples, tolerance);
  if (!c.passed) {
    throw FlagError("bracket flags not verified: antisymmetry residual " +
                    std::to_string(c.antisymmetry_residual) + ", Jacobi residual " +
                    std::to_string(c.jacobi_residual));
  }
  return VerifiedBracket(std::move(B), c);
}

Eigen::VectorXd periodic_mean(const OscillationProfile& p) {
  return p.samples().colwise().mean().transpose();
}

OscillationProfile oscillating_primitive(const OscillationProfile& p) {
  const Eigen::VectorXd mean = periodic_mean(p);
  if (mean.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("oscillating_primitive: profile has non-zero mean");
  }
  const int K = p.samples_per_period();
  Eigen::MatrixXd out(K, p.dim());
  for (int c = 0; c < p.dim(); ++c) {
    const Eigen::VectorXd col = p.samples().col(c);
    auto coef = spectral::rfft(std::span<const double>(col.data(), static_cast<std::size_t>(K)));
    coef[0] = 0.0;
    for (int k = 1; k < static_cast<int>(coef.size()); ++k) {
      if (K % 2 == 0 && k == K / 2) {
        // The Nyquist cosine integrates to a sine that vanishes on the grid.
        coef[static_cast<std::size_t>(k)] = 0.0;
      } else {
        coef[static_cast<std::size_t>(k)] /= spectral::Complex(0.0, k);
      }
    }
    const auto prim = spectral::irfft(coef, K);
    for (int j = 0; j < K; ++j) out(j, c) = prim[static_cast<std::size_t>(j)];
  }
  return OscillationProfile(std::move(out));
}

AveragedField::AveragedField(BilinearOperator B, const OscillationProfile& p)
    : B_(std::move(B)), profile_(p), primitive_(oscillating_primitive(p)) {
  require_dim(B_.dim, p.dim(), "AveragedField");
}

Eigen::VectorXd AveragedField::operator()(const Eigen::VectorXd& xbar) const {
  require_dim(B_.dim, xbar.size(), "averaged_rhs");
  const int K = profile_.samples_per_period();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(B_.dim);
  for (int j = 0; j < K; ++j) {
    acc += B_(B_(xbar, primitive_.row(j)), profile_.row(j));
  }
  return acc / K + B_(xbar, xbar);
}

Eigen::VectorXd averaged_rhs(const BilinearOperator& B, const OscillationProfile& p,
                             const Eigen::VectorXd& xbar) {
  return AveragedField(B, p)(xbar);
}

AlgebraElement drift_vector(const LieAlgebra& A, const OscillationProfile& p) {
  require_dim(A.dim(), p.dim(), "drift_vector");
  const OscillationProfile prim = oscillating_primitive(p);
  const int K = p.samples_per_period();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(A.dim());
  for (int j = 0; j < K; ++j) acc += bracket(A, {p.row(j)}, {prim.row(j)}).coords;
  return {0.5 * acc / K};
}

Eigen::VectorXd shift_vector(const BilinearOperator& B, const OscillationProfile& p) {
  require_dim(B.dim, p.dim(), "shift_vector");
  const OscillationProfile prim = oscillating_primitive(p);
  const int K = p.samples_per_period();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(B.dim);
  for (int j = 0; j < K; ++j) acc += B(p.row(j), prim.row(j));
  return 0.5 * acc / K;
}

Eigen::VectorXd shifted_averaged_rhs(const VerifiedBracket& B, const Eigen::VectorXd& V,
                                     const Eigen::VectorXd& xbar) {
  require_dim(B.op().dim, V.size(), "shifted_averaged_rhs");
  require_dim(B.op().dim, xbar.size(), "shifted_averaged_rhs");
  return B.op()(V + xbar, xbar);
}

}  // namespace lieavg

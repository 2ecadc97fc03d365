#pragma once

// Two-dimensional Craik–Leibovich flow on the 2π-periodic torus in vorticity
// form: ∂ω/∂s + (v + V0)·∇ω = 0, with v recovered from ω by
//   Δψ = -ω,  v = (-∂_y ψ, ∂_x ψ).
// Pseudo-spectral derivatives, 2/3-rule dealiasing, classical RK4 in time.
//
// Grid layout: node (i, j) sits at (x, y) = (2πi/N, 2πj/N) and is stored at
// index i*N + j. Transforms are unnormalised forward, 1/N² inverse.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lieavg/expr.hpp"

namespace lieavg::cl {

class VorticityField {
 public:
  /// `values` is N*N, row-major. Throws unless N is a power of two >= 16 and
  /// |Σω|/N² < 1e-12.
  VorticityField(int N, std::vector<double> values);

  /// Sample an expression in x and y on the grid.
  static VorticityField from_expression(const expr::Expression& e, int N);
  static VorticityField zero(int N);
  /// Sum of cos/sin modes with 0 < |k| <= kmax and uniform coefficients,
  /// rescaled so that max |w| = amplitude.
  static VorticityField random_band_limited(int N, int kmax, std::uint64_t seed,
                                            double amplitude = 1.0);

  int size() const { return N_; }
  const std::vector<double>& values() const { return values_; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * N_ + j]; }
  double mean() const;
  double max_abs() const;

 private:
  int N_;
  std::vector<double> values_;
};

struct StokesDrift {
  double x = 0.0;
  double y = 0.0;
};

struct VelocityField {
  int N = 0;
  std::vector<double> vx;
  std::vector<double> vy;

  double max_speed() const;
};

VelocityField vorticity_to_velocity(const VorticityField& w);

/// -(v + V0)·∇ω, dealiased.
VorticityField cl_vorticity_rhs(const VorticityField& w, const StokesDrift& d);

/// dt (max|v| + |V0|) N/(2π) <= 0.5
bool cfl_ok(const VorticityField& w, const StokesDrift& d, double dt);

VorticityField cl_step(const VorticityField& w, const StokesDrift& d, double dt);

struct ClRun {
  std::vector<double> times;
  std::vector<VorticityField> frames;
  bool cfl_warning = false;
  bool diverged = false;
};

/// Fixed-step RK4 from w0 over [0, T]; keeps every stride-th frame and the last.
ClRun cl_integrate(const VorticityField& w0, const StokesDrift& d, double T, double dt,
                   int stride = 1);

/// (2π/N)² Σ f(ω_ij) with f an expression in `w`.
double functional_If(const VorticityField& w, const expr::Expression& f);

/// ½ (2π/N)² Σ |v_ij + V0|².
double energy_shifted(const VorticityField& w, const StokesDrift& d);

/// Spectral translation: returns ω(x - a, y - b).
VorticityField translate(const VorticityField& w, double a, double b);

/// Max-norm of the spectral divergence of v.
double velocity_divergence(const VelocityField& v);

/// CSV with header `# N=<N>`, then N rows (index i) of N values (index j).
void write_field_csv(const VorticityField& w, const std::filesystem::path& path);
VorticityField read_field_csv(const std::filesystem::path& path);

}  // namespace lieavg::cl

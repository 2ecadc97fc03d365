#pragma once

// ε-sweep experiments comparing the fast oscillating system
//   dμ/dt = -ad*_{ε v1(t) + 𝕀^{-1}μ} μ,   μ(0) = ε² m_init,
// against its averaged (slow) equation
//   dμ̄/ds = -ad*_{𝕀^{-1}μ̄ + V1} μ̄,       s = ε² t,   V1 = avg ½[v1, v1^τ].

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lieavg/algebra.hpp"
#include "lieavg/averaging.hpp"
#include "lieavg/expr.hpp"
#include "lieavg/integrate.hpp"

namespace lieavg {

struct FastSlowScenario {
  LieAlgebra algebra;
  std::vector<expr::Expression> v1;  // per-coordinate, in t
  DualElement m_init;
  std::vector<double> epsilons;
  double T = 5.0;
  int steps_per_period = 256;
  int K = 256;
  int slow_steps = 4096;
  double ball_radius = std::numeric_limits<double>::infinity();

  /// Throws std::invalid_argument on dimension mismatch, non-zero-mean v1,
  /// or epsilons outside (0, 1) / repeated.
  void validate() const;
  OscillationProfile profile() const;
  AlgebraElement drift() const;
};

struct SweepRecord {
  double epsilon = 0.0;
  double max_err = 0.0;
  double energy_drift = 0.0;
  bool diverged = false;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::optional<double> slope;
  bool left_ball = false;  // averaged run exited the configured ball
  std::vector<std::string> warnings;
};

/// E(μ) = ½<μ + 𝕀V, 𝕀^{-1}μ + V>.
double shifted_energy(const LieAlgebra& A, const AlgebraElement& V, const DualElement& mu);

/// Fast run over whole forcing periods in [0, T/ε²]; returns μ* = μ/ε²
/// sampled once per period.
Trajectory run_fast(const FastSlowScenario& s, double eps);

/// Averaged run over s ∈ [0, T] with T/slow_steps steps, every step recorded.
Trajectory run_averaged(const FastSlowScenario& s);

/// Cubic Hermite interpolation of an averaged trajectory at slow time `s`.
State interpolate_averaged(const FastSlowScenario& sc, const Trajectory& slow, double s);

/// sup over the fast samples of the energy-norm distance to the averaged
/// solution at s = ε² t.
double max_error(const FastSlowScenario& s, const Trajectory& fast, const Trajectory& slow,
                 double eps);

/// max_k |E(μ*(t_k)) - E(μ*(0))| with E the shifted energy.
double adiabatic_drift(const FastSlowScenario& s, const Trajectory& fast);
double adiabatic_report(const FastSlowScenario& s, double eps);

/// Unweighted least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs every ε (concurrently), fits the slope over non-diverged records
/// with positive error.
SweepResult sweep(const FastSlowScenario& s);

/// Header `epsilon,max_err,energy_drift,diverged`; 17-digit floats; optional
/// `# slope=<value>` line.
void emit_csv(const std::vector<SweepRecord>& records, const std::optional<double>& slope,
              const std::filesystem::path& path);
std::string sweep_csv(const std::vector<SweepRecord>& records, const std::optional<double>& slope);

struct SweepCsv {
  std::vector<SweepRecord> records;
  std::optional<double> slope;
};
SweepCsv read_sweep_csv(const std::filesystem::path& path);
SweepCsv parse_sweep_csv(const std::string& text);

/// Log–log plot of max_err against ε.
std::string sweep_svg(const std::vector<SweepRecord>& records);

}  // namespace lieavg

#pragma once

// Fixed-step classical RK4 for every dynamical system in the library.

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "lieavg/averaging.hpp"

namespace lieavg {

using State = Eigen::VectorXd;
using VectorField = std::function<State(double t, const State& x)>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sampled curve. Row k of `states` is the state at times[k].
struct Trajectory {
  std::vector<double> times;
  RowMatrix states;
  int stride = 1;
  double dt = 0.0;
  bool diverged = false;
  std::optional<double> diverged_at;  // first time with a non-finite state

  int samples() const { return static_cast<int>(times.size()); }
  State state(int k) const { return states.row(k).transpose(); }
  State final_state() const { return state(samples() - 1); }
};

/// One classical RK4 step. Non-finite stage values propagate into the result.
State rk4_step(const VectorField& f, const State& x, double t, double dt);

/// round((t1 - t0)/dt) RK4 steps of size (t1 - t0)/steps, so the run ends
/// exactly at t1. Records every stride-th state, plus the final one. On a
/// non-finite state the run stops and returns the partial trajectory with
/// `diverged` set.
Trajectory integrate_fixed(const VectorField& f, const State& x0, double t0, double t1, double dt,
                           int stride = 1);

/// Number of steps integrate_fixed takes.
long step_count(double t0, double t1, double dt);

/// B(x, eps*y1(t) + x) with y1 given by trigonometric interpolation of `p`.
State fast_system_rhs(const BilinearOperator& B, const OscillationProfile& p, double eps,
                      const State& x, double t);

/// Same, with y1 evaluated directly.
State fast_system_rhs(const BilinearOperator& B, const std::function<State(double)>& y1,
                      double eps, const State& x, double t);

}  // namespace lieavg

#include "lieavg/integrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lieavg {

State rk4_step(const VectorField& f, const State& x, double t, double dt) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * dt, x + (0.5 * dt) * k1);
  const State k3 = f(t + 0.5 * dt, x + (0.5 * dt) * k2);
  const State k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

long step_count(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_fixed: dt must be positive");
  if (!(t1 > t0)) throw std::invalid_argument("integrate_fixed: t1 must exceed t0");
  const double steps = std::round((t1 - t0) / dt);
  if (!(steps < static_cast<double>(std::numeric_limits<long>::max() / 2))) {
    throw std::invalid_argument("integrate_fixed: step count out of range");
  }
  return std::max(1L, static_cast<long>(steps));
}

Trajectory integrate_fixed(const VectorField& f, const State& x0, double t0, double t1, double dt,
                           int stride) {
  if (stride < 1) throw std::invalid_argument("integrate_fixed: stride must be >= 1");
  const long steps = step_count(t0, t1, dt);
  const double h = (t1 - t0) / static_cast<double>(steps);

  Trajectory traj;
  traj.stride = stride;
  traj.dt = h;
  const long records = steps / stride + 1 + (steps % stride != 0 ? 1 : 0);
  traj.states.resize(records, x0.size());
  traj.times.reserve(static_cast<std::size_t>(records));

  long row = 0;
  auto record = [&](long k, const State& x) {
    traj.times.push_back(t0 + static_cast<double>(k) * h);
    traj.states.row(row++) = x.transpose();
  };

  State x = x0;
  record(0, x);
  for (long k = 1; k <= steps; ++k) {
    x = rk4_step(f, x, t0 + static_cast<double>(k - 1) * h, h);
    if (!x.allFinite()) {
      traj.diverged = true;
      traj.diverged_at = t0 + static_cast<double>(k) * h;
      break;
    }
    if (k % stride == 0 || k == steps) record(k, x);
  }
  traj.states.conservativeResize(row, Eigen::NoChange);
  return traj;
}

State fast_system_rhs(const BilinearOperator& B, const OscillationProfile& p, double eps,
                      const State& x, double t) {
  return B(x, eps * p.interpolate(t) + x);
}

State fast_system_rhs(const BilinearOperator& B, const std::function<State(double)>& y1,
                      double eps, const State& x, double t) {
  return B(x, eps * y1(t) + x);
}

}  // namespace lieavg

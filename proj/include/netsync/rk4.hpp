#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "netsync/types.hpp"

namespace netsync {

/// Node states over a uniform time grid. Each state is N x n, one row per node.
struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
  /// A non-finite state was produced; the trajectory stops at the last finite sample.
  bool diverged = false;

  int n_nodes() const { return states.empty() ? 0 : static_cast<int>(states.front().rows()); }
  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().cols()); }
  const Matrix& final_state() const { return states.back(); }
};

struct TimeGrid {
  double t_end = 1.0;
  double dt = 1e-3;
  /// Keep every k-th sample (the final sample is always kept).
  int record_every = 1;

  long steps() const { return std::lround(t_end / dt); }
};

/// Classical fixed-step fourth-order Runge-Kutta on a matrix-valued state.
template <typename Field>
Trajectory integrate_rk4(Field&& field, Matrix x, const TimeGrid& grid) {
  const long steps = grid.steps();
  const double h = grid.dt;
  const int every = grid.record_every > 0 ? grid.record_every : 1;

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps / every + 2));
  traj.states.reserve(static_cast<std::size_t>(steps / every + 2));
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  Matrix k1, k2, k3, k4;
  for (long s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s - 1) * h;
    k1 = field(t, x);
    k2 = field(t + 0.5 * h, x + (0.5 * h) * k1);
    k3 = field(t + 0.5 * h, x + (0.5 * h) * k2);
    k4 = field(t + h, x + h * k3);
    Matrix next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      traj.diverged = true;
      if (traj.times.back() != t) {
        traj.times.push_back(t);
        traj.states.push_back(x);
      }
      return traj;
    }
    x = std::move(next);
    if (s % every == 0 || s == steps) {
      traj.times.push_back(static_cast<double>(s) * h);
      traj.states.push_back(x);
    }
  }
  return traj;
}

}  // namespace netsync

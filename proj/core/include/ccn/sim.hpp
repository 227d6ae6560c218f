#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "ccn/dynamics.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Fixed-step integration and flow-level synchrony checks.
// ---------------------------------------------------------------------------

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;                // steps + 1 entries
  std::vector<std::vector<double>> states;  // aligned with times
};

/// Classic fourth-order Runge-Kutta with a fixed step. Deterministic:
/// identical inputs produce identical trajectories. Throws NonFiniteState
/// (naming the step) if the state leaves the finite range.
template <typename F>
  requires std::is_invocable_v<F&, const std::vector<double>&, std::vector<double>&>
Trajectory integrate_rk4(F&& f, const std::vector<double>& x0, double dt, int steps) {
  if (dt <= 0.0) fail(Errc::dimension_mismatch, "step size must be positive");
  if (steps < 0) fail(Errc::dimension_mismatch, "step count must be nonnegative");

  const size_t n = x0.size();
  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  std::vector<double> x = x0;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  for (int step = 0; step < steps; ++step) {
    f(x, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    f(tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    f(tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    f(tmp, k4);
    for (size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    for (double v : x) {
      if (!std::isfinite(v)) {
        fail(Errc::non_finite_state,
             "state left the finite range at step " + std::to_string(step + 1));
      }
    }
    traj.times.push_back((step + 1) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory integrate_rk4(const AssembledField& field, const std::vector<double>& x0,
                         double dt, int steps);

struct SyncReport {
  bool pass = false;
  double max_point_defect = 0.0;  // field-level, from sampled states
  double max_flow_defect = 0.0;   // trajectory-level, over the time grid
  double point_tol = 0.0;
  double flow_tol = 0.0;
  double dt = 0.0;
  int steps = 0;
  int samples = 0;
  uint64_t seed = 0;
};

/// Integrates downstairs from `x0_codomain` and upstairs from the gathered
/// initial state, then reports how far the gathered downstairs flow drifts
/// from the upstairs flow. The sampled field-level defect rides along.
SyncReport flow_sync_check(const GraphMorphism& phi, const VirtualField& w,
                           const std::vector<double>& x0_codomain, double dt = 1e-3,
                           int steps = 10000, double flow_tol = 1e-6,
                           double point_tol = 1e-10, int samples = 64,
                           uint64_t seed = 42);

}  // namespace ccn

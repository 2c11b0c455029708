// Fixed-step closed-loop simulation of the hexarotor and a saturated RISE
// controller.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satrise/diagnostics.hpp"

namespace satrise {

/// Concatenated ODE state [q; q̇; e_f; s] with s = Tanh(z).
using StateVector = Eigen::Matrix<double, 24, 1>;

/// Classical fourth-order Runge-Kutta step of ẋ = f(t, x).
template <typename Vec, typename F>
Vec rk4_step(F&& f, const Vec& x, double t, double dt) {
  const Vec k1 = f(t, x);
  const Vec k2 = f(t + 0.5 * dt, (x + 0.5 * dt * k1).eval());
  const Vec k3 = f(t + 0.5 * dt, (x + 0.5 * dt * k2).eval());
  const Vec k4 = f(t + dt, (x + dt * k3).eval());
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Scenario {
  VehicleParams params;
  ControllerGains gains;
  ControllerKind controller = ControllerKind::kProposed;
  DisturbanceModel disturbance = DisturbanceModel::table_one();
  ReferenceTrajectory trajectory = ReferenceTrajectory::table_one();
  Vec6 q0 = Vec6::Zero();
  Vec6 qdot0 = Vec6::Zero();
  double dt = 1e-3;
  double duration = 20.0;
  SgnMode sgn = SgnMode::hard();
  std::uint64_t seed = 0;  // reserved for stochastic disturbances
  double t_transient = 5.0;
  double divergence_threshold = 5.0;

  /// Table I settings with Table II gains and the proposed controller.
  static Scenario defaults() { return {}; }

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
};

MetricsOptions metrics_options(const Scenario& sc);

/// Right-hand side of the closed loop plus the signals the log needs.
class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& sc);

  struct Evaluation {
    StateVector xdot;
    ControlOutput out;
    ControllerState controller;
    Vec6 e2dot;
    Mat6 M;
  };

  Evaluation evaluate(double t, const StateVector& x) const;
  StateVector derivative(double t, const StateVector& x) const { return evaluate(t, x).xdot; }

  /// Controller output recomputed from a state and controller state.
  ControlOutput control(double t, const State& s, const ControllerState& cs) const;

  StateVector initial_state() const;
  const ControllerGains& gains() const { return gains_; }
  const WrenchMap& wrench() const { return wrench_; }
  const InputShift& shift() const { return shift_; }

 private:
  struct Step {
    ControlStep control;
    Mat6 M;
  };
  Step control_step(double t, const State& s, const ControllerState& cs) const;

  Scenario sc_;
  WrenchMap wrench_;
  InputShift shift_;
  ControllerGains gains_;
};

/// Saturation integrator state from s = Tanh(z), clamped to ±kZClamp.
Vec6 z_from_saturation(const Vec6& s);

struct SimResult {
  std::vector<SimLogRecord> log;
  bool diverged = false;
  std::string halt_reason;
  ControllerGains effective_gains;
  ValidationReport gains_report;
  TrackingMetrics metrics;
  StateVector final_state = StateVector::Zero();
};

SimResult run(const Scenario& sc);

}  // namespace satrise

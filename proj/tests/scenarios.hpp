// Scenarios shared by the simulation tests and the acceptance suite.
#pragma once

#include <cmath>

#include "satrise/sim.hpp"

namespace satrise::testing {

inline Scenario table_scenario(ControllerKind kind) {
  Scenario sc = Scenario::defaults();
  sc.controller = kind;
  return sc;
}

/// Starts on the reference so the loop stays away from the saturation
/// corners; smooth sgn keeps the right-hand side differentiable.
inline Scenario on_reference_smooth(double dt, double duration = 1.0, double eps = 0.1) {
  Scenario sc = Scenario::defaults();
  const ReferenceSample r0 = reference(0.0, sc.trajectory);
  sc.q0 = r0.q;
  sc.qdot0 = r0.qdot;
  sc.sgn = SgnMode::smooth(eps);
  sc.dt = dt;
  sc.duration = duration;
  return sc;
}

/// Hover-consistent box: u_mid equals the hover thrust, so z = 0 holds the
/// vehicle at rest without a disturbance.
inline Scenario hover_regulation(double duration = 5.0) {
  Scenario sc = Scenario::defaults();
  const double hover = sc.params.mass * sc.params.gravity / (6.0 * std::cos(sc.params.tilt));
  sc.params.u_min = Vec6::Zero();
  sc.params.u_max = Vec6::Constant(2.0 * hover);
  sc.disturbance = DisturbanceModel::none();
  sc.q0 = (Vec6() << 0, 0, 1, 0, 0, 0).finished();
  sc.trajectory = ReferenceTrajectory::constant(sc.q0);
  sc.duration = duration;
  return sc;
}

/// Observed order log2(|x_h - x_{h/2}| / |x_{h/2} - x_{h/4}|) on the final
/// plant state.
struct ConvergenceStudy {
  double diff_coarse;
  double diff_fine;
  double order;
};

template <typename MakeScenario>
ConvergenceStudy self_convergence(MakeScenario&& make, double dt) {
  Eigen::Matrix<double, 12, 1> x[3];
  for (int k = 0; k < 3; ++k) {
    const SimResult res = run(make(dt / std::pow(2.0, k)));
    x[k] = res.final_state.head<12>();
  }
  const double a = (x[0] - x[1]).norm();
  const double b = (x[1] - x[2]).norm();
  return {a, b, std::log2(a / b)};
}

}  // namespace satrise::testing

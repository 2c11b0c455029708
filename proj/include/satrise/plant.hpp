// Tilted-hexarotor rigid-body model: allocation, equations of motion,
// disturbance and reference signals.
#pragma once

#include <stdexcept>

#include "satrise/vecmath.hpp"

namespace satrise {

class SingularAllocation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VehicleParams {
  double mass = 2.9;                                   // [kg]
  Mat3 inertia = Vec3(0.035, 0.035, 0.045).asDiagonal();  // [kg m^2]
  double arm_length = 0.258;                           // L [m]
  double tilt = 30.0 * std::numbers::pi / 180.0;       // alpha [rad]
  double k_f = 0.016;                                  // thrust-to-torque [m]
  double gravity = 9.81;                               // [m/s^2]
  Vec6 u_max = Vec6::Constant(20.0);                   // [N]
  Vec6 u_min = Vec6::Zero();                           // [N]
  double rho = 1.2;  // attitude confinement bound on |roll|, |pitch| [rad]

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Generalized coordinates q = [p; φ] and their rates.
struct State {
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();

  Vec3 position() const { return q.head<3>(); }
  EulerAngles attitude() const { return EulerAngles::from(q.tail<3>()); }
  Vec3 euler_rates() const { return qdot.tail<3>(); }
};

/// Constant rotor-thrust to body-wrench map [f; τ] = A u.
struct WrenchMap {
  Mat6 A;
  Mat6 A_inv;
};

/// Builds A for the tilted hexarotor geometry. Throws SingularAllocation
/// when |det A| < 1e-9.
WrenchMap build_allocation_matrix(const VehicleParams& params);

/// Angular offsets of the allocation row structure.
struct ArmCoefficients {
  double p1;  // L cos(alpha) - k_f sin(alpha)
  double p2;  // L sin(alpha) + k_f cos(alpha)
};
ArmCoefficients arm_coefficients(const VehicleParams& params);

/// Accelerations q̈ of the physical model. d_t acts in the world frame,
/// d_r in the body frame.
Vec6 nominal_eom(const State& s, const Vec6& u, const Vec3& d_t, const Vec3& d_r,
                 const VehicleParams& params, const WrenchMap& wrench);

/// Terms of M(q) q̈ = G(q) A v + h(q, q̇) + d with the symmetric mass matrix.
struct PlantTerms {
  Mat6 M;
  Vec6 h;
  Mat6 G;
  Mat6 Gdot;
};

PlantTerms reformulate(const State& s, const VehicleParams& params, const WrenchMap& wrench);

/// Mass matrix blkdiag(m I, QᵀJQ) and its time derivative along (φ, φ̇).
Mat6 mass_matrix(const EulerAngles& e, const VehicleParams& params);
Mat6 mass_matrix_dot(const EulerAngles& e, const Vec3& edot, const VehicleParams& params);

/// Disturbance as seen by the reformulated model: G [Rᵀ d_t; d_r].
Vec6 reformulated_disturbance(const State& s, const Vec3& d_t, const Vec3& d_r);

/// q̈ from the reformulated model with shifted input v = u - u_m.
Vec6 reformulated_eom(const State& s, const Vec6& v, const Vec3& d_t, const Vec3& d_r,
                      const VehicleParams& params, const WrenchMap& wrench);

/// Symmetric input box: u_mid ± v_bar.
struct InputShift {
  Vec6 u_mid;
  Vec6 v_bar;
  bool degenerate = false;  // some rotor has an empty range
};
InputShift input_shift(const VehicleParams& params);

/// Eigenvalue extremes of M(q) over a sampled attitude grid.
struct MassBounds {
  double lower;  // min over samples of λ_min(M)
  double upper;  // max over samples of λ_max(M)
};
MassBounds sample_mass_bounds(const VehicleParams& params, double rho, int grid = 33);

/// Per-component offset + amplitude * sin(frequency * t + phase).
struct SinusoidSignal {
  Vec6 offset = Vec6::Zero();
  Vec6 amplitude = Vec6::Zero();
  Vec6 frequency = Vec6::Zero();  // [rad/s]
  Vec6 phase = Vec6::Zero();      // [rad]

  /// k-th time derivative (k = 0 is the value).
  Vec6 derivative(double t, int k) const;
};

struct DisturbanceSample {
  Vec3 d_t;   // world-frame force [N]
  Vec3 d_r;   // body-frame torque [N m]
  Vec6 ddot;  // time derivative of [d_t; d_r]
};

struct DisturbanceModel {
  SinusoidSignal signal;

  static DisturbanceModel table_one();
  static DisturbanceModel none() { return {}; }
};

DisturbanceSample disturbance(double t, const DisturbanceModel& model);

struct ReferenceSample {
  Vec6 q;
  Vec6 qdot;
  Vec6 qddot;
  Vec6 qdddot;
};

struct ReferenceTrajectory {
  SinusoidSignal signal;

  /// Unit circle at 1 m altitude with period 10 s, level attitude.
  static ReferenceTrajectory table_one();
  static ReferenceTrajectory constant(const Vec6& q);
};

ReferenceSample reference(double t, const ReferenceTrajectory& traj);

}  // namespace satrise

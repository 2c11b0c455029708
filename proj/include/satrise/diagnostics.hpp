// Lyapunov-analysis quantities evaluated numerically along a simulation,
// plus tracking metrics over a log.
#pragma once

#include <limits>
#include <span>
#include <stdexcept>

#include "satrise/controllers.hpp"

namespace satrise {

class EmptyLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One row of a closed-loop simulation.
struct SimLogRecord {
  double t = 0.0;
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();
  Vec6 q_d = Vec6::Zero();
  Vec6 u = Vec6::Zero();
  Vec6 e1 = Vec6::Zero();
  Vec6 e2 = Vec6::Zero();
  double V = 0.0;
  double P = 0.0;
  // Controller state at t; kept in memory, not serialized.
  ControllerState controller;
};

/// r = ė2 + Λ2 Tanh(e2) + Λ3 e2.
Vec6 compute_r(const Vec6& e2dot, const Vec6& e2, const ControllerGains& gains);

/// N_d = Ṁ q̈_d + M q⃛_d − ḣ_d − ḋ along the reference, with d = G(q_d)[Rᵀd_t; d_r].
/// ḣ_d is a central difference of h(q_d(t), q̇_d(t)) with step 1e-6; every
/// other term is analytic.
Vec6 compute_Nd(double t, const ReferenceTrajectory& traj, const DisturbanceModel& dist,
                const VehicleParams& params, const WrenchMap& wrench);

/// Empirical suprema of |N_d| and |Ṅ_d| over [t0, t0 + span].
struct NdSweep {
  Vec6 zeta_nd1;
  Vec6 zeta_nd2;
};
NdSweep sweep_Nd(const ReferenceTrajectory& traj, const DisturbanceModel& dist,
                 const VehicleParams& params, const WrenchMap& wrench, double t0, double span,
                 int samples);

struct LyapunovInputs {
  double t = 0.0;
  Vec6 e1;
  Vec6 e2;
  Vec6 e_f;
  Vec6 e2dot;
  Mat6 M;
  Vec6 Nd;
};

struct LyapunovSample {
  double t = 0.0;
  double V = 0.0;
  double P = 0.0;
  double Pdot = 0.0;
  Vec6 r = Vec6::Zero();
  Vec6 Nd = Vec6::Zero();
};

/// Ṗ = −rᵀ(N_d − Θ sgn(e2)).
double p_rate(const Vec6& r, const Vec6& Nd, const Vec6& e2, const ControllerGains& gains,
              const SgnMode& sgn);

/// V with every term except P; adding P gives the full candidate.
double lyapunov_without_p(const LyapunovInputs& in, const Vec6& r);

/// Sample at t0 with P(t0) = Σ θᵢ|e2ᵢ(t0)| − e2(t0)ᵀ N_d(t0).
LyapunovSample lyapunov_initial(const LyapunovInputs& in, const ControllerGains& gains,
                                const SgnMode& sgn);

/// Advances P by the trapezoidal rule and reassembles V.
LyapunovSample lyapunov_step(const LyapunovSample& prev, const LyapunovInputs& in,
                             const ControllerGains& gains, const SgnMode& sgn, double dt);

/// φ1(y) = ½ min(1, m̲) tanh²‖y‖ and φ2(y) = max(½ m̄, 3/2) ‖y‖², with
/// y = [e1; e2; r; e_f; √P].
struct LyapunovEnvelope {
  double lower;
  double upper;
};
LyapunovEnvelope lyapunov_envelope(const LyapunovInputs& in, const Vec6& r, double P,
                                   double m_lower, double m_upper);

/// Count of windows [t, t + width] (t on the sample grid, t ≥ t_start)
/// where V rises by more than tol.
int count_v_rises(std::span<const SimLogRecord> log, double t_start, double width, double tol);

struct MetricsOptions {
  double t_transient = 5.0;
  double duration = 0.0;  // nominal run length; a shorter log counts as diverged
  double dt = 0.0;
  Vec6 u_min = Vec6::Zero();
  Vec6 u_max = Vec6::Constant(20.0);
  double rho = 1.2;
  double divergence_threshold = 5.0;  // position error norm [m]
};

struct TrackingMetrics {
  double rmse_pos_transient = std::numeric_limits<double>::quiet_NaN();
  double rmse_pos_steady = std::numeric_limits<double>::quiet_NaN();
  double rmse_att_steady = std::numeric_limits<double>::quiet_NaN();
  double max_bound_violation = 0.0;
  bool diverged = false;
};

/// True when a record breaches the divergence criteria.
bool record_diverged(const SimLogRecord& rec, double rho, double threshold);

/// RMSE windows use samples with t < t_transient and t ≥ t_transient; an
/// empty window yields NaN. Throws EmptyLog.
TrackingMetrics compute_metrics(std::span<const SimLogRecord> log, const MetricsOptions& opts);

}  // namespace satrise

#include "satrise/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace satrise {

Vec6 compute_r(const Vec6& e2dot, const Vec6& e2, const ControllerGains& gains) {
  return e2dot + gains.lambda2.cwiseProduct(vtanh(e2)) + gains.lambda3.cwiseProduct(e2);
}

namespace {

Vec6 h_along(double t, const ReferenceTrajectory& traj, const VehicleParams& params,
             const WrenchMap& wrench) {
  const ReferenceSample ref = reference(t, traj);
  return reformulate(State{ref.q, ref.qdot}, params, wrench).h;
}

}  // namespace

Vec6 compute_Nd(double t, const ReferenceTrajectory& traj, const DisturbanceModel& dist,
                const VehicleParams& params, const WrenchMap& wrench) {
  const ReferenceSample ref = reference(t, traj);
  const State sd{ref.q, ref.qdot};
  const EulerAngles e = sd.attitude();
  const Vec3 edot = sd.euler_rates();

  const Mat6 M = mass_matrix(e, params);
  const Mat6 Mdot = mass_matrix_dot(e, edot, params);

  constexpr double kStep = 1e-6;
  const Vec6 hdot = (h_along(t + kStep, traj, params, wrench) - h_along(t - kStep, traj, params, wrench)) /
                    (2.0 * kStep);

  const DisturbanceSample ds = disturbance(t, dist);
  const Mat3 q = euler_rate_jacobian(e);
  const Mat3 qd = euler_rate_jacobian_dot(e, edot);
  Vec6 ddot;
  ddot.head<3>() = ds.ddot.head<3>();
  ddot.tail<3>() = qd.transpose() * ds.d_r + q.transpose() * ds.ddot.tail<3>();

  return Mdot * ref.qddot + M * ref.qdddot - hdot - ddot;
}

NdSweep sweep_Nd(const ReferenceTrajectory& traj, const DisturbanceModel& dist,
                 const VehicleParams& params, const WrenchMap& wrench, double t0, double span,
                 int samples) {
  NdSweep out{Vec6::Zero(), Vec6::Zero()};
  constexpr double kStep = 1e-4;
  for (int k = 0; k <= samples; ++k) {
    const double t = t0 + span * k / std::max(samples, 1);
    const Vec6 nd = compute_Nd(t, traj, dist, params, wrench);
    const Vec6 rate = (compute_Nd(t + kStep, traj, dist, params, wrench) -
                       compute_Nd(t - kStep, traj, dist, params, wrench)) /
                      (2.0 * kStep);
    out.zeta_nd1 = out.zeta_nd1.cwiseMax(nd.cwiseAbs());
    out.zeta_nd2 = out.zeta_nd2.cwiseMax(rate.cwiseAbs());
  }
  return out;
}

double p_rate(const Vec6& r, const Vec6& Nd, const Vec6& e2, const ControllerGains& gains,
              const SgnMode& sgn) {
  return -r.dot(Nd - gains.theta.cwiseProduct(sgn_vec(e2, sgn)));
}

double lyapunov_without_p(const LyapunovInputs& in, const Vec6& r) {
  return sum_log_cosh(in.e1) + sum_log_cosh(in.e2) + 0.5 * in.e2.squaredNorm() +
         0.5 * r.dot(in.M * r) + 0.5 * in.e_f.squaredNorm();
}

LyapunovSample lyapunov_initial(const LyapunovInputs& in, const ControllerGains& gains,
                                const SgnMode& sgn) {
  LyapunovSample s;
  s.t = in.t;
  s.r = compute_r(in.e2dot, in.e2, gains);
  s.Nd = in.Nd;
  s.P = gains.theta.dot(in.e2.cwiseAbs()) - in.e2.dot(in.Nd);
  s.Pdot = p_rate(s.r, in.Nd, in.e2, gains, sgn);
  s.V = lyapunov_without_p(in, s.r) + s.P;
  return s;
}

LyapunovSample lyapunov_step(const LyapunovSample& prev, const LyapunovInputs& in,
                             const ControllerGains& gains, const SgnMode& sgn, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("lyapunov_step: dt must be positive");
  LyapunovSample s;
  s.t = in.t;
  s.r = compute_r(in.e2dot, in.e2, gains);
  s.Nd = in.Nd;
  s.Pdot = p_rate(s.r, in.Nd, in.e2, gains, sgn);
  s.P = prev.P + 0.5 * dt * (prev.Pdot + s.Pdot);
  s.V = lyapunov_without_p(in, s.r) + s.P;
  return s;
}

LyapunovEnvelope lyapunov_envelope(const LyapunovInputs& in, const Vec6& r, double P,
                                   double m_lower, double m_upper) {
  const double y2 = in.e1.squaredNorm() + in.e2.squaredNorm() + r.squaredNorm() +
                    in.e_f.squaredNorm() + std::max(P, 0.0);
  const double th = std::tanh(std::sqrt(y2));
  return {0.5 * std::min(1.0, m_lower) * th * th, std::max(0.5 * m_upper, 1.5) * y2};
}

int count_v_rises(std::span<const SimLogRecord> log, double t_start, double width, double tol) {
  int count = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].t < t_start) continue;
    j = std::max(j, i);
    // Window end: last sample with t <= t_i + width (half-sample slack for rounding).
    while (j + 1 < log.size() && log[j + 1].t <= log[i].t + width * (1.0 + 1e-9)) ++j;
    if (log[j].t < log[i].t + width * (1.0 - 1e-6)) break;  // incomplete trailing window
    if (log[j].V - log[i].V > tol) ++count;
  }
  return count;
}

bool record_diverged(const SimLogRecord& rec, double rho, double threshold) {
  if (!rec.q.allFinite() || !rec.qdot.allFinite()) return true;
  if (rec.e1.head<3>().norm() > threshold) return true;
  return !in_attitude_domain(EulerAngles::from(rec.q.tail<3>()), rho);
}

TrackingMetrics compute_metrics(std::span<const SimLogRecord> log, const MetricsOptions& opts) {
  if (log.empty()) throw EmptyLog("metrics requested for an empty log");
  TrackingMetrics m;
  double pos_tr = 0.0, pos_ss = 0.0, att_ss = 0.0;
  std::size_t n_tr = 0, n_ss = 0;
  for (const auto& rec : log) {
    const double ep = rec.e1.head<3>().squaredNorm();
    if (rec.t < opts.t_transient) {
      pos_tr += ep;
      ++n_tr;
    } else {
      pos_ss += ep;
      att_ss += rec.e1.tail<3>().squaredNorm();
      ++n_ss;
    }
    const double over = (rec.u - opts.u_max).maxCoeff();
    const double under = (opts.u_min - rec.u).maxCoeff();
    m.max_bound_violation = std::max({m.max_bound_violation, over, under});
    if (record_diverged(rec, opts.rho, opts.divergence_threshold)) m.diverged = true;
  }
  if (n_tr > 0) m.rmse_pos_transient = std::sqrt(pos_tr / static_cast<double>(n_tr));
  if (n_ss > 0) {
    m.rmse_pos_steady = std::sqrt(pos_ss / static_cast<double>(n_ss));
    m.rmse_att_steady = std::sqrt(att_ss / static_cast<double>(n_ss));
  }
  if (opts.duration > 0.0 && log.back().t < opts.duration - 0.5 * opts.dt) m.diverged = true;
  return m;
}

}  // namespace satrise

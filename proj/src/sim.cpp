#include "satrise/sim.hpp"

#include <cmath>

namespace satrise {

void Scenario::validate() const {
  params.validate();
  gains.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(duration >= dt) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be at least dt");
  }
  if (!q0.allFinite() || !qdot0.allFinite()) throw std::invalid_argument("q0/qdot0 must be finite");
  if (!in_attitude_domain(EulerAngles::from(q0.tail<3>()), params.rho)) {
    throw std::invalid_argument("q0 attitude must satisfy |roll|, |pitch| < rho");
  }
  if (sgn.kind == SgnMode::Kind::kSmooth && !(sgn.eps > 0.0)) {
    throw std::invalid_argument("sgn smoothing width must be positive");
  }
  if (!(t_transient >= 0.0)) throw std::invalid_argument("t_transient must be non-negative");
  if (!(divergence_threshold > 0.0)) throw std::invalid_argument("divergence_threshold must be positive");
}

MetricsOptions metrics_options(const Scenario& sc) {
  MetricsOptions m;
  m.t_transient = sc.t_transient;
  m.duration = sc.duration;
  m.dt = sc.dt;
  m.u_min = sc.params.u_min;
  m.u_max = sc.params.u_max;
  m.rho = sc.params.rho;
  m.divergence_threshold = sc.divergence_threshold;
  return m;
}

Vec6 z_from_saturation(const Vec6& s) {
  Vec6 z;
  for (int i = 0; i < 6; ++i) {
    const double c = std::clamp(s(i), -1.0, 1.0);
    z(i) = std::clamp(std::atanh(c), -kZClamp, kZClamp);
  }
  return z;
}

ClosedLoop::ClosedLoop(const Scenario& sc)
    : sc_(sc),
      wrench_(build_allocation_matrix(sc.params)),
      shift_(input_shift(sc.params)),
      gains_(effective_gains(sc.controller, sc.gains, wrench_, shift_)) {}

StateVector ClosedLoop::initial_state() const {
  StateVector x = StateVector::Zero();
  x.segment<6>(0) = sc_.q0;
  x.segment<6>(6) = sc_.qdot0;
  return x;  // e_f(0) = 0, z(0) = 0
}

ClosedLoop::Step ClosedLoop::control_step(double t, const State& s, const ControllerState& cs) const {
  const ReferenceSample ref = reference(t, sc_.trajectory);
  if (sc_.controller == ControllerKind::kBaseline) {
    const Mat6 M = mass_matrix(s.attitude(), sc_.params);
    return {baseline_control(s, ref, cs, gains_, M, wrench_, shift_, sc_.sgn), M};
  }
  const PlantTerms terms = reformulate(s, sc_.params, wrench_);
  return {proposed_control(s, ref, cs, gains_, terms, wrench_, shift_, sc_.sgn), terms.M};
}

ControlOutput ClosedLoop::control(double t, const State& s, const ControllerState& cs) const {
  return control_step(t, s, cs).control.out;
}

ClosedLoop::Evaluation ClosedLoop::evaluate(double t, const StateVector& x) const {
  const State s{x.segment<6>(0), x.segment<6>(6)};
  const ControllerState cs{x.segment<6>(12), z_from_saturation(x.segment<6>(18))};

  const Step step = control_step(t, s, cs);
  const DisturbanceSample d = disturbance(t, sc_.disturbance);
  const Vec6 qddot = nominal_eom(s, step.control.out.u, d.d_t, d.d_r, sc_.params, wrench_);
  const ReferenceSample ref = reference(t, sc_.trajectory);

  Evaluation ev;
  ev.out = step.control.out;
  ev.controller = cs;
  ev.M = step.M;
  const FilterSignals f = error_filters(s, ref, cs, gains_);
  const Vec6 sech2 = (Vec6::Ones() - vtanh(f.e1).cwiseAbs2()).eval();
  ev.e2dot = (ref.qddot - qddot) + gains_.lambda1.cwiseProduct(sech2).cwiseProduct(f.e1dot) + f.efdot;

  ev.xdot.segment<6>(0) = s.qdot;
  ev.xdot.segment<6>(6) = qddot;
  ev.xdot.segment<6>(12) = f.efdot;
  ev.xdot.segment<6>(18) = step.control.sat_rate;
  return ev;
}

namespace {

SimLogRecord make_record(double t, const StateVector& x, const ClosedLoop::Evaluation& ev,
                         const Vec6& q_d, const LyapunovSample& lyap) {
  SimLogRecord rec;
  rec.t = t;
  rec.q = x.segment<6>(0);
  rec.qdot = x.segment<6>(6);
  rec.q_d = q_d;
  rec.u = ev.out.u;
  rec.e1 = ev.out.e1;
  rec.e2 = ev.out.e2;
  rec.V = lyap.V;
  rec.P = lyap.P;
  rec.controller = ev.controller;
  return rec;
}

LyapunovInputs lyapunov_inputs(double t, const StateVector& x, const ClosedLoop::Evaluation& ev,
                               const Scenario& sc, const WrenchMap& wrench) {
  return {t, ev.out.e1, ev.out.e2, x.segment<6>(12), ev.e2dot, ev.M,
          compute_Nd(t, sc.trajectory, sc.disturbance, sc.params, wrench)};
}

}  // namespace

SimResult run(const Scenario& sc) {
  sc.validate();
  const ClosedLoop loop(sc);
  SimResult res;
  res.effective_gains = loop.gains();
  const MassBounds mb = sample_mass_bounds(sc.params, sc.params.rho);
  res.gains_report = validate_gains(loop.gains(), mb.lower, mb.upper);

  const auto steps = static_cast<long>(std::llround(sc.duration / sc.dt));
  res.log.reserve(static_cast<std::size_t>(steps) + 1);

  StateVector x = loop.initial_state();
  auto rhs = [&loop](double t, const StateVector& xs) { return loop.derivative(t, xs); };

  ClosedLoop::Evaluation ev = loop.evaluate(0.0, x);
  LyapunovSample lyap = lyapunov_initial(lyapunov_inputs(0.0, x, ev, sc, loop.wrench()), loop.gains(), sc.sgn);
  res.log.push_back(make_record(0.0, x, ev, reference(0.0, sc.trajectory).q, lyap));

  for (long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * sc.dt;
    const double t = static_cast<double>(k) * sc.dt;
    try {
      StateVector next = rk4_step(rhs, x, t_prev, sc.dt);
      next.segment<6>(18) = next.segment<6>(18).cwiseMax(-1.0).cwiseMin(1.0);
      if (!next.allFinite()) {
        res.diverged = true;
        res.halt_reason = "non-finite state at t = " + std::to_string(t);
        break;
      }
      if (!in_attitude_domain(EulerAngles::from(next.segment<3>(3)), sc.params.rho)) {
        x = next;
        res.diverged = true;
        res.halt_reason = "attitude left the admissible set at t = " + std::to_string(t);
        // Record the exiting state when it can still be evaluated.
        ev = loop.evaluate(t, x);
        lyap = lyapunov_step(lyap, lyapunov_inputs(t, x, ev, sc, loop.wrench()), loop.gains(), sc.sgn, sc.dt);
        res.log.push_back(make_record(t, x, ev, reference(t, sc.trajectory).q, lyap));
        break;
      }
      x = next;
      ev = loop.evaluate(t, x);
    } catch (const DomainError& e) {
      res.diverged = true;
      res.halt_reason = e.what();
      break;
    } catch (const SingularInput& e) {
      res.diverged = true;
      res.halt_reason = e.what();
      break;
    }
    lyap = lyapunov_step(lyap, lyapunov_inputs(t, x, ev, sc, loop.wrench()), loop.gains(), sc.sgn, sc.dt);
    res.log.push_back(make_record(t, x, ev, reference(t, sc.trajectory).q, lyap));
    if (record_diverged(res.log.back(), sc.params.rho, sc.divergence_threshold)) {
      res.diverged = true;
      res.halt_reason = "position error exceeded " + std::to_string(sc.divergence_threshold) +
                        " m at t = " + std::to_string(t);
      break;
    }
  }
  res.final_state = x;
  res.metrics = compute_metrics(res.log, metrics_options(sc));
  return res;
}

}  // namespace satrise

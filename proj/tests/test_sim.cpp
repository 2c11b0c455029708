#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "satrise/sim.hpp"

using namespace satrise;
using namespace satrise::testing;

namespace {

using Scalar1 = Eigen::Matrix<double, 1, 1>;

const SimResult& sim3() {
  static const SimResult res = run(table_scenario(ControllerKind::kProposed));
  return res;
}

const SimResult& sim2() {
  static const SimResult res = run(table_scenario(ControllerKind::kProposedNoSgn));
  return res;
}

StateVector state_from_record(const SimLogRecord& rec) {
  StateVector x;
  x << rec.q, rec.qdot, rec.controller.e_f, vtanh(rec.controller.z);
  return x;
}

}  // namespace

TEST(Rk4, ConstantStateIsFixed) {
  const Scalar1 x = Scalar1::Constant(3.5);
  const Scalar1 y = rk4_step([](double, const Scalar1&) { return Scalar1::Zero().eval(); }, x, 0.0, 0.1);
  EXPECT_EQ(y(0), 3.5);
}

TEST(Rk4, ExponentialDecayLocalErrorIsFifthOrder) {
  auto f = [](double, const Scalar1& x) { return (-x).eval(); };
  auto local_error = [&](double dt) {
    const Scalar1 x0 = Scalar1::Constant(1.0);
    return std::abs(rk4_step(f, x0, 0.0, dt)(0) - std::exp(-dt));
  };
  EXPECT_LT(local_error(0.1), 1e-6);
  // Leading term is dt⁵ / 120.
  EXPECT_NEAR(local_error(0.1), std::pow(0.1, 5) / 120.0, 2e-8);
  EXPECT_NEAR(std::log2(local_error(0.1) / local_error(0.05)), 5.0, 0.1);
}

TEST(Scenario, ValidationNamesTheKey) {
  Scenario sc;
  sc.dt = -1.0;
  try {
    sc.validate();
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("dt"), std::string::npos);
  }
  sc = {};
  sc.q0(4) = 1.3;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = {};
  sc.duration = 1e-4;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
}

TEST(Run, ProposedStaysInsideTheBoxAndTracks) {
  const SimResult& res = sim3();
  EXPECT_FALSE(res.diverged) << res.halt_reason;
  EXPECT_EQ(res.log.size(), 20001u);
  EXPECT_DOUBLE_EQ(res.log.back().t, 20.0);
  EXPECT_EQ(res.metrics.max_bound_violation, 0.0);
  for (const auto& rec : res.log) {
    ASSERT_TRUE((rec.u.array() >= 0.0).all() && (rec.u.array() <= 20.0).all()) << rec.t;
  }
  EXPECT_LT(res.metrics.rmse_pos_steady, sim2().metrics.rmse_pos_steady);
}

TEST(Run, LogTimesStrictlyIncreaseOnTheGrid) {
  const auto& log = sim3().log;
  for (std::size_t k = 1; k < log.size(); ++k) {
    ASSERT_GT(log[k].t, log[k - 1].t);
    ASSERT_DOUBLE_EQ(log[k].t, static_cast<double>(k) * 1e-3);
  }
}

TEST(Run, BaselineDivergesAndHalts) {
  const SimResult res = run(table_scenario(ControllerKind::kBaseline));
  EXPECT_TRUE(res.diverged);
  EXPECT_TRUE(res.metrics.diverged);
  EXPECT_FALSE(res.halt_reason.empty());
  EXPECT_LT(res.log.back().t, 20.0);
}

TEST(Run, HoverRegulationHoldsStill) {
  const SimResult res = run(hover_regulation());
  EXPECT_FALSE(res.diverged);
  double worst = 0.0;
  for (const auto& rec : res.log) worst = std::max({worst, rec.e1.cwiseAbs().maxCoeff(), rec.e2.cwiseAbs().maxCoeff()});
  EXPECT_LT(worst, 1e-2);
}

TEST(Run, IdenticalScenariosGiveIdenticalLogs) {
  Scenario sc = table_scenario(ControllerKind::kProposed);
  sc.duration = 2.0;
  const SimResult a = run(sc), b = run(sc);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t k = 0; k < a.log.size(); ++k) {
    ASSERT_EQ(a.log[k].q, b.log[k].q);
    ASSERT_EQ(a.log[k].u, b.log[k].u);
    ASSERT_EQ(a.log[k].V, b.log[k].V);
  }
}

TEST(Run, LoggedControllerStateReproducesThrust) {
  const Scenario sc = table_scenario(ControllerKind::kProposed);
  const ClosedLoop loop(sc);
  const auto& log = sim3().log;
  for (std::size_t k = 0; k < log.size(); k += 37) {
    const SimLogRecord& rec = log[k];
    const ControlOutput out = loop.control(rec.t, State{rec.q, rec.qdot}, rec.controller);
    ASSERT_EQ(out.u, rec.u) << "t = " << rec.t;
    ASSERT_EQ(out.e2, rec.e2);
  }
}

TEST(Run, LemmaStorageStaysNonNegative) {
  double p_min = 1e300;
  for (const auto& rec : sim3().log) p_min = std::min(p_min, rec.P);
  EXPECT_GE(p_min, -1e-6);
}

TEST(Run, CandidateStaysInsideEnvelopeAlongTrajectory) {
  const Scenario sc = table_scenario(ControllerKind::kProposed);
  const ClosedLoop loop(sc);
  const MassBounds mb = sample_mass_bounds(sc.params, sc.params.rho);
  const auto& log = sim3().log;
  for (std::size_t k = 0; k < log.size(); k += 50) {
    const SimLogRecord& rec = log[k];
    const auto ev = loop.evaluate(rec.t, state_from_record(rec));
    const LyapunovInputs in{rec.t, rec.e1, rec.e2, rec.controller.e_f, ev.e2dot, ev.M, Vec6::Zero()};
    const LyapunovEnvelope env = lyapunov_envelope(in, compute_r(ev.e2dot, rec.e2, loop.gains()), rec.P, mb.lower,
                                                   mb.upper);
    EXPECT_LE(env.lower, rec.V * (1 + 1e-9)) << rec.t;
    EXPECT_LE(rec.V, env.upper * (1 + 1e-9)) << rec.t;
  }
}

TEST(Run, SmoothClosedLoopIsFourthOrder) {
  const ConvergenceStudy study = self_convergence([](double dt) { return on_reference_smooth(dt); }, 2e-3);
  EXPECT_GE(study.order, 3.5) << study.diff_coarse << " / " << study.diff_fine;
}

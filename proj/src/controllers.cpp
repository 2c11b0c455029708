#include "satrise/controllers.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace satrise {

void ControllerGains::validate() const {
  auto positive = [](const Vec6& v) { return v.allFinite() && (v.array() > 0.0).all(); };
  if (!positive(lambda1)) throw std::invalid_argument("Lambda1 must be positive");
  if (!positive(lambda2)) throw std::invalid_argument("Lambda2 must be positive");
  if (!positive(lambda3)) throw std::invalid_argument("Lambda3 must be positive");
  if (!positive(gamma1)) throw std::invalid_argument("Gamma1 must be positive");
  if (!positive(gamma2)) throw std::invalid_argument("Gamma2 must be positive");
  if (!theta.allFinite() || (theta.array() < 0.0).any()) {
    throw std::invalid_argument("Theta must be non-negative");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
}

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kProposed: return "proposed";
    case ControllerKind::kProposedNoSgn: return "proposed-no-sgn";
    case ControllerKind::kBaseline: return "baseline";
  }
  return "unknown";
}

std::optional<ControllerKind> parse_controller_kind(std::string_view name) {
  if (name == "proposed") return ControllerKind::kProposed;
  if (name == "proposed-no-sgn") return ControllerKind::kProposedNoSgn;
  if (name == "baseline") return ControllerKind::kBaseline;
  return std::nullopt;
}

Vec6 sgn_vec(const Vec6& e2, const SgnMode& mode) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) {
    if (mode.kind == SgnMode::Kind::kSmooth) {
      out(i) = std::tanh(e2(i) / mode.eps);
    } else {
      out(i) = e2(i) > 0.0 ? 1.0 : (e2(i) < 0.0 ? -1.0 : 0.0);
    }
  }
  return out;
}

FilterSignals error_filters(const State& s, const ReferenceSample& ref, const ControllerState& cs,
                            const ControllerGains& gains) {
  FilterSignals f;
  f.e1 = ref.q - s.q;
  f.e1dot = ref.qdot - s.qdot;
  const Vec6 t1 = vtanh(f.e1);
  f.e2 = f.e1dot + gains.lambda1.cwiseProduct(t1) + cs.e_f;
  f.efdot = -gains.gamma1.cwiseProduct(f.e2) + t1 - gains.gamma2.cwiseProduct(cs.e_f);
  return f;
}

Vec6 rise_drive(const Mat6& M, const Vec6& e2, const ControllerGains& gains, const SgnMode& sgn) {
  const Vec6 inner = gains.lambda2.cwiseProduct(vtanh(e2)) + gains.lambda3.cwiseProduct(e2) +
                     gains.gamma2.cwiseProduct(e2);
  return M * gains.gamma1.cwiseProduct(inner) + gains.theta.cwiseProduct(sgn_vec(e2, sgn));
}

namespace {

Vec6 clamp_z(const Vec6& z) { return z.cwiseMax(-kZClamp).cwiseMin(kZClamp); }

// ż = Cosh²(z) w; saturate at the clamp so Cosh² stays representable.
ControlStep finish(const Vec6& z, const Vec6& w, ControlStep step) {
  const Vec6 c = clamp_z(z).array().cosh().matrix();
  step.sat_rate = w;
  step.zdot = c.cwiseProduct(c).cwiseProduct(w);
  return step;
}

}  // namespace

ControlStep proposed_control(const State& s, const ReferenceSample& ref, const ControllerState& cs,
                             const ControllerGains& gains, const PlantTerms& terms,
                             const WrenchMap& wrench, const InputShift& shift, const SgnMode& sgn) {
  const FilterSignals f = error_filters(s, ref, cs, gains);
  const Vec6 z = clamp_z(cs.z);

  ControlStep step;
  step.out.e1 = f.e1;
  step.out.e2 = f.e2;
  step.out.v = gains.gamma1.cwiseProduct(vtanh(z));
  step.out.u = step.out.v + shift.u_mid;

  Eigen::PartialPivLU<Mat6> g_lu(terms.G);
  if (!std::isfinite(g_lu.determinant()) || std::abs(g_lu.determinant()) < 1e-9) {
    throw SingularInput("input matrix G(q) is singular; attitude left the admissible set");
  }
  const Vec6 bracket = rise_drive(terms.M, f.e2, gains, sgn) - terms.Gdot * wrench.A * step.out.v;
  const Vec6 w = (wrench.A_inv * g_lu.solve(bracket)).cwiseQuotient(gains.gamma1);
  return finish(z, w, step);
}

ControlStep baseline_control(const State& s, const ReferenceSample& ref, const ControllerState& cs,
                             const ControllerGains& gains, const Mat6& M, const WrenchMap& wrench,
                             const InputShift& shift, const SgnMode& sgn) {
  const FilterSignals f = error_filters(s, ref, cs, gains);
  const Vec6 z = clamp_z(cs.z);

  ControlStep step;
  step.out.e1 = f.e1;
  step.out.e2 = f.e2;
  const Vec6 vc = gains.gamma1.cwiseProduct(vtanh(z));
  step.out.v = wrench.A_inv * vc;
  step.out.u = step.out.v + shift.u_mid;

  const Vec6 w = rise_drive(M, f.e2, gains, sgn).cwiseQuotient(gains.gamma1);
  return finish(z, w, step);
}

double conservative_bound(const WrenchMap& wrench, const InputShift& shift) {
  const double inf_norm = wrench.A_inv.cwiseAbs().rowwise().sum().maxCoeff();
  return shift.v_bar.minCoeff() / inf_norm;
}

ControllerGains effective_gains(ControllerKind kind, const ControllerGains& gains,
                                const WrenchMap& wrench, const InputShift& shift) {
  ControllerGains out = gains;
  switch (kind) {
    case ControllerKind::kProposed:
      out.gamma1 = shift.v_bar;
      break;
    case ControllerKind::kProposedNoSgn:
      out.gamma1 = shift.v_bar;
      out.theta.setZero();
      break;
    case ControllerKind::kBaseline:
      out.gamma1 = Vec6::Constant(conservative_bound(wrench, shift));
      break;
  }
  return out;
}

bool ValidationReport::checkable_conditions_pass() const {
  return std::none_of(conditions.begin(), conditions.end(),
                      [](const GainCondition& c) { return c.status == GainCondition::Status::kFail; });
}

const GainCondition* ValidationReport::find(std::string_view name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "gain conditions (m_lower = " << m_lower << ", m_upper = " << m_upper << ")\n";
  for (const auto& c : conditions) {
    const char* status = "unchecked";
    switch (c.status) {
      case GainCondition::Status::kPass: status = "PASS"; break;
      case GainCondition::Status::kFail: status = "FAIL"; break;
      case GainCondition::Status::kUnchecked: status = "unchecked"; break;
      case GainCondition::Status::kNotCheckable: status = "not machine-checkable"; break;
    }
    os << "  [" << status << "] " << c.name << ": " << c.expression;
    if (c.status == GainCondition::Status::kPass || c.status == GainCondition::Status::kFail) {
      os << "  (lhs " << c.lhs << ", rhs " << c.rhs << ", margin " << c.margin << ")";
    }
    os << "\n";
  }
  if (mu) os << "  mu = " << *mu << "\n";
  os << (checkable_conditions_pass() ? "result: all checkable conditions pass\n"
                                     : "result: some checkable conditions fail\n");
  return os.str();
}

ValidationReport validate_gains(const ControllerGains& gains, double m_lower, double m_upper) {
  using Status = GainCondition::Status;
  ValidationReport rep;
  rep.m_lower = m_lower;
  rep.m_upper = m_upper;

  auto add = [&rep](std::string name, std::string expr, double lhs, double rhs) {
    GainCondition c{std::move(name), std::move(expr), lhs, rhs, lhs - rhs,
                    lhs > rhs ? Status::kPass : Status::kFail};
    rep.conditions.push_back(std::move(c));
  };

  const double l1 = gains.lambda1.minCoeff();
  const double l3 = gains.lambda3.minCoeff();
  const double g1_min = gains.gamma1.minCoeff();
  const double g1_max = gains.gamma1.maxCoeff();
  const double g2 = gains.gamma2.minCoeff();
  const double xi2 = gains.xi * gains.xi;

  const double c_l1 = 0.5;
  const double c_l3 = 0.5 + g1_max * g1_max * xi2 / 4.0;
  const double c_g2 = 1.0 / xi2;
  add("lambda1", "min(Lambda1) > 1/2", l1, c_l1);
  add("lambda3", "min(Lambda3) > 1/2 + max(Gamma1)^2 xi^2 / 4", l3, c_l3);
  add("gamma2", "min(Gamma2) > 1/xi^2", g2, c_g2);
  add("m_gamma1", "m_lower * min(Gamma1) > eta", m_lower * g1_min, gains.eta);

  if (gains.zeta_nd1 && gains.zeta_nd2) {
    for (int i = 0; i < 6; ++i) {
      const double bound = (*gains.zeta_nd1)(i) + (*gains.zeta_nd2)(i) / gains.lambda3(i);
      add("theta_" + std::to_string(i + 1), "theta_i > zeta_Nd1,i + zeta_Nd2,i / lambda3,i",
          gains.theta(i), bound);
    }
  } else {
    rep.conditions.push_back({"theta", "theta_i > zeta_Nd1,i + zeta_Nd2,i / lambda3,i "
                              "(zeta vectors not supplied)", 0, 0, 0, Status::kUnchecked});
  }
  rep.conditions.push_back({"region_of_attraction",
                            "4 eta mu > rho^2(||w(0)||) (rho(.) is not available in closed form)",
                            0, 0, 0, Status::kNotCheckable});

  rep.mu = std::min({l1 - c_l1, l3 - c_l3, g2 - c_g2, m_lower * g1_min - gains.eta});
  return rep;
}

}  // namespace satrise

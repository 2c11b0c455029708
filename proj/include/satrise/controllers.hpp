// Saturated RISE tracking controllers for the hexarotor.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satrise/plant.hpp"

namespace satrise {

class SingularInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrator states beyond this magnitude are clamped; tanh(20) == 1 in
/// double precision, so the clamp never changes the emitted thrust.
inline constexpr double kZClamp = 20.0;

/// Diagonals of the diagonal gain matrices plus the analysis constants.
struct ControllerGains {
  Vec6 lambda1 = Vec6::Constant(2.0);
  Vec6 lambda2 = Vec6::Constant(10.0);
  Vec6 lambda3 = Vec6::Constant(10.0);
  Vec6 gamma1 = Vec6::Constant(10.0);
  Vec6 gamma2 = Vec6::Constant(1.0);
  Vec6 theta = (Vec6() << 20.0, 20.0, 20.0, 0.1, 0.1, 0.1).finished();
  double eta = 0.01;
  double xi = 1.5;
  std::optional<Vec6> zeta_nd1;  // sup_t |N_d,i|
  std::optional<Vec6> zeta_nd2;  // sup_t |dN_d,i/dt|

  /// Throws std::invalid_argument unless every diagonal is strictly positive
  /// (theta may be zero for the no-sgn variant).
  void validate() const;
};

struct ControllerState {
  Vec6 e_f = Vec6::Zero();
  Vec6 z = Vec6::Zero();
};

struct ControlOutput {
  Vec6 u;   // rotor thrusts [N]
  Vec6 v;   // shifted input u - u_mid
  Vec6 e1;
  Vec6 e2;
};

enum class ControllerKind { kProposed, kProposedNoSgn, kBaseline };

std::string_view to_string(ControllerKind kind);
/// Accepts "proposed", "proposed-no-sgn", "baseline".
std::optional<ControllerKind> parse_controller_kind(std::string_view name);

struct SgnMode {
  enum class Kind { kHard, kSmooth } kind = Kind::kHard;
  double eps = 0.0;  // boundary-layer width in smooth mode

  static SgnMode hard() { return {}; }
  static SgnMode smooth(double eps) { return {Kind::kSmooth, eps}; }
};

/// Element-wise sign (sgn(0) = 0) or tanh(x / eps).
Vec6 sgn_vec(const Vec6& e2, const SgnMode& mode);

struct FilterSignals {
  Vec6 e1;
  Vec6 e1dot;
  Vec6 e2;
  Vec6 efdot;
};

FilterSignals error_filters(const State& s, const ReferenceSample& ref, const ControllerState& cs,
                            const ControllerGains& gains);

struct ControlStep {
  ControlOutput out;
  Vec6 zdot;
  /// d/dt Tanh(z) = Cosh⁻²(z) ż, formed without the Cosh² factor.
  Vec6 sat_rate;
};

/// The bracket M Γ1 {Λ2 Tanh(e2) + Λ3 e2 + Γ2 e2} + Θ sgn(e2) shared by
/// both saturated laws.
Vec6 rise_drive(const Mat6& M, const Vec6& e2, const ControllerGains& gains, const SgnMode& sgn);

/// Saturated RISE law with the state-dependent input matrix G(q) A.
/// Requires gains.gamma1 == v_bar so that u stays inside the thrust box.
ControlStep proposed_control(const State& s, const ReferenceSample& ref, const ControllerState& cs,
                             const ControllerGains& gains, const PlantTerms& terms,
                             const WrenchMap& wrench, const InputShift& shift, const SgnMode& sgn);

/// Saturated RISE on the virtual input v_c = G A v with G taken as identity;
/// gains.gamma1 must be the conservative bound.
ControlStep baseline_control(const State& s, const ReferenceSample& ref, const ControllerState& cs,
                             const ControllerGains& gains, const Mat6& M, const WrenchMap& wrench,
                             const InputShift& shift, const SgnMode& sgn);

/// min v̄ / ‖A⁻¹ G(0)⁻¹‖∞ with G(0) = I.
double conservative_bound(const WrenchMap& wrench, const InputShift& shift);

/// Gains actually used by each controller variant: Γ1 = diag(v̄) for the
/// proposed law, Γ1 = v̄_c I for the baseline, Θ = 0 for no-sgn.
ControllerGains effective_gains(ControllerKind kind, const ControllerGains& gains,
                                const WrenchMap& wrench, const InputShift& shift);

struct GainCondition {
  enum class Status { kPass, kFail, kUnchecked, kNotCheckable };
  std::string name;
  std::string expression;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  Status status = Status::kUnchecked;
};

struct ValidationReport {
  std::vector<GainCondition> conditions;
  std::optional<double> mu;
  double m_lower = 0.0;
  double m_upper = 0.0;

  bool checkable_conditions_pass() const;
  const GainCondition* find(std::string_view name) const;
  std::string to_text() const;
};

ValidationReport validate_gains(const ControllerGains& gains, double m_lower, double m_upper);

}  // namespace satrise

#include "satrise/plant.hpp"

#include <algorithm>
#include <limits>

namespace satrise {

namespace {

const Vec3 kWorldUp(0.0, 0.0, 1.0);

Mat6 blkdiag(const Mat3& a, const Mat3& b) {
  Mat6 out = Mat6::Zero();
  out.topLeftCorner<3, 3>() = a;
  out.bottomRightCorner<3, 3>() = b;
  return out;
}

}  // namespace

void VehicleParams::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (!(mass > 0.0) || !std::isfinite(mass)) fail("mass must be positive");
  if (!inertia.allFinite() || (inertia - inertia.transpose()).norm() > 1e-12) {
    fail("inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) fail("inertia must be positive definite");
  if (!(arm_length > 0.0)) fail("arm_length must be positive");
  if (!(tilt > 0.0)) fail("tilt must be positive");
  if (!(k_f > 0.0)) fail("k_f must be positive");
  if (!(gravity > 0.0)) fail("gravity must be positive");
  if (!u_max.allFinite() || !u_min.allFinite()) fail("thrust limits must be finite");
  if ((u_min.array() > u_max.array()).any()) fail("u_min must not exceed u_max");
  if (!(rho > 0.0) || !(rho < std::numbers::pi / 2.0)) fail("rho must lie in (0, pi/2)");
}

ArmCoefficients arm_coefficients(const VehicleParams& params) {
  const double ca = std::cos(params.tilt), sa = std::sin(params.tilt);
  return {params.arm_length * ca - params.k_f * sa, params.arm_length * sa + params.k_f * ca};
}

WrenchMap build_allocation_matrix(const VehicleParams& params) {
  const double ca = std::cos(params.tilt), sa = std::sin(params.tilt);
  const auto [p1, p2] = arm_coefficients(params);
  const double r3 = std::sqrt(3.0) / 2.0;
  Mat6 a;
  a << -0.5 * sa, -0.5 * sa, sa, -0.5 * sa, -0.5 * sa, sa,
       -r3 * sa,  r3 * sa,   0.0, -r3 * sa, r3 * sa,   0.0,
       ca,        ca,        ca,  ca,       ca,        ca,
       -0.5 * p1, 0.5 * p1,  p1,  0.5 * p1, -0.5 * p1, -p1,
       -r3 * p1,  -r3 * p1,  0.0, r3 * p1,  r3 * p1,   0.0,
       -p2,       p2,        -p2, p2,       -p2,       p2;
  Eigen::FullPivLU<Mat6> lu(a);
  if (std::abs(lu.determinant()) < 1e-9) {
    throw SingularAllocation("allocation matrix is singular for the given geometry");
  }
  return {a, lu.inverse()};
}

Vec6 nominal_eom(const State& s, const Vec6& u, const Vec3& d_t, const Vec3& d_r,
                 const VehicleParams& params, const WrenchMap& wrench) {
  const EulerAngles e = s.attitude();
  const Mat3 r = rotation_matrix(e);
  const Mat3 q = euler_rate_jacobian(e);
  const Mat3 qd = euler_rate_jacobian_dot(e, s.euler_rates());
  const Vec3 omega = q * s.euler_rates();
  const Mat3& j = params.inertia;

  const Vec6 wrench_body = wrench.A * u;
  Vec6 acc;
  acc.head<3>() = (r * wrench_body.head<3>() + d_t) / params.mass - params.gravity * kWorldUp;
  const Vec3 rhs = wrench_body.tail<3>() - j * qd * s.euler_rates() - omega.cross(j * omega) + d_r;
  acc.tail<3>() = (j * q).lu().solve(rhs);
  return acc;
}

Mat6 mass_matrix(const EulerAngles& e, const VehicleParams& params) {
  const Mat3 q = euler_rate_jacobian(e);
  return blkdiag(params.mass * Mat3::Identity(), q.transpose() * params.inertia * q);
}

Mat6 mass_matrix_dot(const EulerAngles& e, const Vec3& edot, const VehicleParams& params) {
  const Mat3 q = euler_rate_jacobian(e);
  const Mat3 qd = euler_rate_jacobian_dot(e, edot);
  const Mat3& j = params.inertia;
  return blkdiag(Mat3::Zero(), qd.transpose() * j * q + q.transpose() * j * qd);
}

PlantTerms reformulate(const State& s, const VehicleParams& params, const WrenchMap& wrench) {
  const EulerAngles e = s.attitude();
  const Mat3 r = rotation_matrix(e);
  const Mat3 q = euler_rate_jacobian(e);
  const Mat3 qd = euler_rate_jacobian_dot(e, s.euler_rates());
  const Vec3 omega = q * s.euler_rates();
  const Mat3& j = params.inertia;

  PlantTerms out;
  out.M = blkdiag(params.mass * Mat3::Identity(), q.transpose() * j * q);
  out.G = blkdiag(r, q.transpose());
  out.Gdot = blkdiag(r * hat(omega), qd.transpose());

  Vec6 h_nominal;
  h_nominal.head<3>() = -params.mass * params.gravity * r.transpose() * kWorldUp;
  h_nominal.tail<3>() = -j * qd * s.euler_rates() - omega.cross(j * omega);
  out.h = out.G * (h_nominal + wrench.A * input_shift(params).u_mid);
  return out;
}

Vec6 reformulated_disturbance(const State& s, const Vec3& d_t, const Vec3& d_r) {
  const Mat3 q = euler_rate_jacobian(s.attitude());
  Vec6 d;
  d.head<3>() = d_t;
  d.tail<3>() = q.transpose() * d_r;
  return d;
}

Vec6 reformulated_eom(const State& s, const Vec6& v, const Vec3& d_t, const Vec3& d_r,
                      const VehicleParams& params, const WrenchMap& wrench) {
  const PlantTerms t = reformulate(s, params, wrench);
  const Vec6 rhs = t.G * wrench.A * v + t.h + reformulated_disturbance(s, d_t, d_r);
  return t.M.ldlt().solve(rhs);
}

InputShift input_shift(const VehicleParams& params) {
  InputShift out;
  out.u_mid = 0.5 * (params.u_max + params.u_min);
  out.v_bar = 0.5 * (params.u_max - params.u_min);
  out.degenerate = (out.v_bar.array() <= 0.0).any();
  return out;
}

MassBounds sample_mass_bounds(const VehicleParams& params, double rho, int grid) {
  MassBounds out{std::numeric_limits<double>::infinity(), 0.0};
  const double pi = std::numbers::pi;
  auto node = [grid](double lo, double hi, int k) {
    return grid > 1 ? lo + (hi - lo) * k / (grid - 1) : 0.5 * (lo + hi);
  };
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      for (int k = 0; k < grid; ++k) {
        const EulerAngles e{node(-rho, rho, i), node(-rho, rho, j), node(-pi, pi, k)};
        Eigen::SelfAdjointEigenSolver<Mat6> eig(mass_matrix(e, params), Eigen::EigenvaluesOnly);
        out.lower = std::min(out.lower, eig.eigenvalues().minCoeff());
        out.upper = std::max(out.upper, eig.eigenvalues().maxCoeff());
      }
    }
  }
  return out;
}

Vec6 SinusoidSignal::derivative(double t, int k) const {
  Vec6 out;
  for (int i = 0; i < 6; ++i) {
    const double w = frequency(i);
    // d^k/dt^k sin(wt + c) = w^k sin(wt + c + kπ/2)
    out(i) = amplitude(i) * std::pow(w, k) * std::sin(w * t + phase(i) + k * std::numbers::pi / 2.0);
    if (k == 0) out(i) += offset(i);
  }
  return out;
}

DisturbanceModel DisturbanceModel::table_one() {
  DisturbanceModel m;
  m.signal.offset << 0.0, 0.0, -5.0, 0.0, 0.05, 0.0;
  m.signal.amplitude << 5.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  m.signal.frequency << std::numbers::pi / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  return m;
}

DisturbanceSample disturbance(double t, const DisturbanceModel& model) {
  const Vec6 d = model.signal.derivative(t, 0);
  return {d.head<3>(), d.tail<3>(), model.signal.derivative(t, 1)};
}

ReferenceTrajectory ReferenceTrajectory::table_one() {
  ReferenceTrajectory r;
  const double w = std::numbers::pi / 5.0;
  r.signal.offset << 0.0, 0.0, 1.0, 0.0, 0.0, 0.0;
  r.signal.amplitude << 1.0, 1.0, 0.0, 0.0, 0.0, 0.0;
  r.signal.frequency << w, w, 0.0, 0.0, 0.0, 0.0;
  r.signal.phase << std::numbers::pi / 2.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  return r;
}

ReferenceTrajectory ReferenceTrajectory::constant(const Vec6& q) {
  ReferenceTrajectory r;
  r.signal.offset = q;
  return r;
}

ReferenceSample reference(double t, const ReferenceTrajectory& traj) {
  const SinusoidSignal& s = traj.signal;
  return {s.derivative(t, 0), s.derivative(t, 1), s.derivative(t, 2), s.derivative(t, 3)};
}

}  // namespace satrise

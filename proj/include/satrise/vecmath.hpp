// Euler-angle kinematics and element-wise hyperbolic helpers.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace satrise {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Raised when an attitude is too close to the Euler-rate singularity.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Distance from pitch = ±π/2 at which the Euler-rate Jacobian is refused.
inline constexpr double kSingularityGuard = 1e-3;

/// ZYX Euler angles: R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct EulerAngles {
  double roll = 0.0;   // phi1 [rad]
  double pitch = 0.0;  // phi2 [rad]
  double yaw = 0.0;    // phi3 [rad]

  static EulerAngles from(const Vec3& v) { return {v(0), v(1), v(2)}; }
  Vec3 vec() const { return {roll, pitch, yaw}; }
};

/// Body-to-world rotation matrix.
Mat3 rotation_matrix(const EulerAngles& e);

/// Q such that body angular velocity ω = Q φ̇. Throws DomainError when
/// |pitch| ≥ π/2 − kSingularityGuard.
Mat3 euler_rate_jacobian(const EulerAngles& e);

/// dQ/dt along (φ, φ̇), from the analytic partials of Q.
Mat3 euler_rate_jacobian_dot(const EulerAngles& e, const Vec3& edot);

/// Skew-symmetric matrix with hat(v) * w = v × w.
Mat3 hat(const Vec3& v);

/// True when |roll|, |pitch| < rho.
inline bool in_attitude_domain(const EulerAngles& e, double rho) {
  return std::abs(e.roll) < rho && std::abs(e.pitch) < rho;
}

template <typename Derived>
auto vtanh(const Eigen::MatrixBase<Derived>& v) {
  return v.array().tanh().matrix().eval();
}

template <typename Derived>
auto vcosh_diag(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  constexpr int N = Derived::RowsAtCompileTime;
  Eigen::Matrix<Scalar, N, N> out = v.array().cosh().matrix().asDiagonal();
  return out;
}

/// Σ ln(cosh(vᵢ)), evaluated without overflowing for large |vᵢ|.
template <typename Derived>
double sum_log_cosh(const Eigen::MatrixBase<Derived>& v) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    acc += a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
  }
  return acc;
}

}  // namespace satrise

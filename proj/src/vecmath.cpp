#include "satrise/vecmath.hpp"

#include <string>

namespace satrise {

namespace {

void guard_pitch(const EulerAngles& e) {
  if (!std::isfinite(e.roll) || !std::isfinite(e.pitch) || !std::isfinite(e.yaw)) {
    throw DomainError("non-finite Euler angles");
  }
  if (std::abs(e.pitch) >= std::numbers::pi / 2.0 - kSingularityGuard) {
    throw DomainError("pitch " + std::to_string(e.pitch) + " rad is at the Euler-rate singularity");
  }
}

}  // namespace

Mat3 rotation_matrix(const EulerAngles& e) {
  const double c1 = std::cos(e.roll), s1 = std::sin(e.roll);
  const double c2 = std::cos(e.pitch), s2 = std::sin(e.pitch);
  const double c3 = std::cos(e.yaw), s3 = std::sin(e.yaw);
  Mat3 r;
  r << c3 * c2, c3 * s2 * s1 - s3 * c1, c3 * s2 * c1 + s3 * s1,
       s3 * c2, s3 * s2 * s1 + c3 * c1, s3 * s2 * c1 - c3 * s1,
       -s2,     c2 * s1,                c2 * c1;
  return r;
}

Mat3 euler_rate_jacobian(const EulerAngles& e) {
  guard_pitch(e);
  const double c1 = std::cos(e.roll), s1 = std::sin(e.roll);
  const double c2 = std::cos(e.pitch), s2 = std::sin(e.pitch);
  Mat3 q;
  q << 1.0, 0.0, -s2,
       0.0, c1,  s1 * c2,
       0.0, -s1, c1 * c2;
  return q;
}

Mat3 euler_rate_jacobian_dot(const EulerAngles& e, const Vec3& edot) {
  guard_pitch(e);
  const double c1 = std::cos(e.roll), s1 = std::sin(e.roll);
  const double c2 = std::cos(e.pitch), s2 = std::sin(e.pitch);
  const double d1 = edot(0), d2 = edot(1);
  // Q depends on roll and pitch only.
  Mat3 qd;
  qd << 0.0, 0.0,       -c2 * d2,
        0.0, -s1 * d1,  c1 * c2 * d1 - s1 * s2 * d2,
        0.0, -c1 * d1,  -s1 * c2 * d1 - c1 * s2 * d2;
  return qd;
}

Mat3 hat(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v(2), v(1),
       v(2), 0.0, -v(0),
       -v(1), v(0), 0.0;
  return s;
}

}  // namespace satrise

#include "wheelins/geom.h"

#include <cmath>

#include "wheelins/errors.h"

namespace wheelins::geom {

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);
  // remainder() maps odd multiples of pi to -pi; the range is (-pi, pi].
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double angle_diff(double a, double b) { return wrap_angle(a - b); }

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Dcm dcm_from_euler(const EulerAngles& e) {
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double ch = std::cos(e.heading), sh = std::sin(e.heading);
  Dcm c;
  c << cp * ch, -cr * sh + sr * sp * ch, sr * sh + cr * sp * ch,
       cp * sh, cr * ch + sr * sp * sh, -sr * ch + cr * sp * sh,
       -sp, sr * cp, cr * cp;
  return c;
}

EulerAngles euler_from_dcm(const Dcm& c) {
  if (std::abs(c(2, 0)) > 1.0 - 1e-9) throw GimbalLock();
  EulerAngles e;
  e.pitch = -std::asin(c(2, 0));
  e.roll = std::atan2(c(2, 1), c(2, 2));
  e.heading = wrap_angle(std::atan2(c(1, 0), c(0, 0)));
  return e;
}

Dcm dcm_body_to_wheel(const MountingAngles& m) {
  const double ct = std::cos(m.pitch), st = std::sin(m.pitch);
  const double cy = std::cos(m.heading), sy = std::sin(m.heading);
  Dcm c;
  c << ct * cy, -sy, st * cy,
       ct * sy, cy, st * sy,
       -st, 0.0, ct;
  return c;
}

Dcm dcm_nav_to_vehicle(double psi_v) {
  return dcm_from_euler({0.0, 0.0, psi_v}).transpose();
}

double vehicle_heading_from_imu(double psi_b) {
  return wrap_angle(psi_b - kPi / 2.0);
}

double imu_heading_from_vehicle(double psi_v) {
  return wrap_angle(psi_v + kPi / 2.0);
}

EulerAngles vehicle_euler(double psi_v) { return {0.0, 0.0, psi_v}; }

double vehicle_heading_from_attitude(const Dcm& c_bn) {
  return vehicle_heading_from_imu(std::atan2(c_bn(1, 0), c_bn(0, 0)));
}

Dcm rotation_exp(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) return Mat3::Identity() + skew(rotvec);
  return Eigen::AngleAxisd(angle, rotvec / angle).toRotationMatrix();
}

Vec3 rotation_log(const Dcm& c) {
  const Eigen::AngleAxisd aa(Eigen::Quaterniond(c).normalized());
  return aa.angle() * aa.axis();
}

Dcm orthonormalize(const Dcm& c) {
  Dcm r = c;
  for (int i = 0; i < 3; ++i) {
    const Mat3 e = r.transpose() * r - Mat3::Identity();
    if (e.cwiseAbs().maxCoeff() < 1e-15) break;
    r -= 0.5 * r * e;
  }
  return r;
}

bool is_rotation(const Dcm& c, double tol) {
  if (!c.allFinite()) return false;
  const double ortho = (c.transpose() * c - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(c.determinant() - 1.0) <= tol;
}

void validate(const MountingAngles& m) {
  if (!(std::abs(m.pitch) < kMaxMountingAngle) ||
      !(std::abs(m.heading) < kMaxMountingAngle)) {
    throw ConfigError("mounting angles must be smaller than 0.2 rad");
  }
}

}  // namespace wheelins::geom

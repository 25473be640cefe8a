#pragma once

#include <Eigen/Dense>
#include <numbers>

namespace wheelins {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// Direction cosine matrix. Kept as a plain Eigen matrix so the measurement
// models can be written the way they are derived; use is_rotation() to check
// the orthonormality invariant.
using Dcm = Eigen::Matrix3d;

namespace geom {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double heading = 0.0;
};

// Pitch and heading misalignment of the IMU body frame w.r.t. the wheel
// frame. Roll is meaningless for a sensor spinning with the wheel.
struct MountingAngles {
  double pitch = 0.0;
  double heading = 0.0;
};

// Largest misalignment accepted when loading a configuration.
inline constexpr double kMaxMountingAngle = 0.2;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Shortest-arc difference a - b, in (-pi, pi].
double angle_diff(double a, double b);

Mat3 skew(const Vec3& v);

/// Z-Y-X (heading, pitch, roll) body-to-navigation rotation C_b^n.
Dcm dcm_from_euler(const EulerAngles& e);

/// Inverse of dcm_from_euler. Throws GimbalLock when |C(2,0)| > 1 - 1e-9.
EulerAngles euler_from_dcm(const Dcm& c);

/// Body-to-wheel rotation C_b^w built from the two mounting angles.
Dcm dcm_body_to_wheel(const MountingAngles& m);

/// Navigation-to-vehicle rotation C_n^v for a level vehicle with heading
/// psi_v. It is the transpose of dcm_from_euler({0, 0, psi_v}), so that
/// C_n^v * v^n yields forward-positive velocity for a vehicle moving along
/// its heading.
Dcm dcm_nav_to_vehicle(double psi_v);

/// The IMU x axis points to the right of the vehicle, so the two headings
/// differ by a fixed quarter turn: psi_v = psi_b - pi/2.
double vehicle_heading_from_imu(double psi_b);
double imu_heading_from_vehicle(double psi_v);

/// Euler angles of the vehicle under the horizontal-motion assumption.
EulerAngles vehicle_euler(double psi_v);

/// Vehicle heading read directly off an IMU attitude (no gimbal check; the
/// wheel IMU never pitches near +-90 deg in normal driving).
double vehicle_heading_from_attitude(const Dcm& c_bn);

/// Rotation matrix exp(rotvec x).
Dcm rotation_exp(const Vec3& rotvec);
/// Rotation vector of c, angle in [0, pi].
Vec3 rotation_log(const Dcm& c);

/// Nearest orthonormal matrix for an almost-orthonormal input.
Dcm orthonormalize(const Dcm& c);

bool is_rotation(const Dcm& c, double tol = 1e-9);

void validate(const MountingAngles& m);

}  // namespace geom
}  // namespace wheelins

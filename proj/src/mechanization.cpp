#include "wheelins/mechanization.h"

#include <cmath>

#include "wheelins/errors.h"

namespace wheelins::mech {

ImuSample compensate(const ImuSample& s, const SensorErrors& e) {
  ImuSample out;
  out.time = s.time;
  out.gyro = (s.gyro - e.gyro_bias).cwiseQuotient(Vec3::Ones() + e.gyro_scale);
  out.accel =
      (s.accel - e.accel_bias).cwiseQuotient(Vec3::Ones() + e.accel_scale);
  return out;
}

NavState propagate(const NavState& nav, const ImuSample& prev,
                   const ImuSample& curr, double gravity) {
  const double dt = curr.time - prev.time;
  if (!(dt > 0.0)) throw NonMonotonicTime(prev.time, curr.time);

  const Vec3 dtheta = curr.gyro * dt;
  const Dcm c_mid = nav.attitude * geom::rotation_exp(0.5 * dtheta);
  const Vec3 gravity_n(0.0, 0.0, gravity);

  NavState out;
  out.time = curr.time;
  out.attitude = geom::orthonormalize(nav.attitude * geom::rotation_exp(dtheta));
  out.velocity = nav.velocity + (c_mid * curr.accel + gravity_n) * dt;
  out.position = nav.position + 0.5 * (nav.velocity + out.velocity) * dt;
  return out;
}

Alignment static_align(std::span<const ImuSample> window,
                       double motion_threshold) {
  const std::size_t n = window.size();
  double duration = 0.0;
  if (n >= 2) {
    const double span = window.back().time - window.front().time;
    duration = span + span / static_cast<double>(n - 1);
  }
  if (n < 2 || duration < kMinAlignmentWindow - 1e-9) {
    throw WindowTooShort(duration);
  }

  Vec3 mean_f = Vec3::Zero();
  Vec3 mean_w = Vec3::Zero();
  for (const auto& s : window) {
    mean_f += s.accel;
    mean_w += s.gyro;
  }
  mean_f /= static_cast<double>(n);
  mean_w /= static_cast<double>(n);

  Vec3 var_f = Vec3::Zero();
  for (const auto& s : window) var_f += (s.accel - mean_f).cwiseAbs2();
  var_f /= static_cast<double>(n - 1);
  const double worst = std::sqrt(var_f.maxCoeff());
  if (worst > motion_threshold) throw MotionDetected(worst, motion_threshold);

  Alignment a;
  a.roll = std::atan2(-mean_f.y(), -mean_f.z());
  a.pitch = std::atan2(mean_f.x(), std::hypot(mean_f.y(), mean_f.z()));
  // Earth rate is below the MEMS bias level and is left in the estimate.
  a.gyro_bias = mean_w;
  return a;
}

}  // namespace wheelins::mech

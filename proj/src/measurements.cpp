#include "wheelins/measurements.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wheelins/errors.h"

namespace wheelins::meas {

using filter::kAtt;
using filter::kGyroBias;
using filter::kGyroScale;
using filter::kVel;

void WheelGeometry::validate() const {
  if (!(radius > 0.0)) throw ConfigError("wheel radius must be positive");
  if (!lever_arm.allFinite() || !(lever_arm.norm() < radius)) {
    throw ConfigError("lever arm must lie inside the wheel (|l| < r)");
  }
  if (forward_sign != 1 && forward_sign != -1) {
    throw ConfigError("forward_sign must be +1 or -1");
  }
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Velocity:
      return "velocity";
    case ModelKind::DisplacementIncrement:
      return "displacement";
    case ModelKind::ContactPoint:
      return "contact";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "velocity") return ModelKind::Velocity;
  if (name == "displacement") return ModelKind::DisplacementIncrement;
  if (name == "contact") return ModelKind::ContactPoint;
  throw ConfigError("unknown measurement model '" + std::string(name) +
                    "' (expected velocity|displacement|contact)");
}

void MeasurementConfig::validate() const {
  if (!(update_rate > 0.0)) throw ConfigError("update rate must be positive");
  const auto positive = [](const Vec3& v) { return (v.array() > 0.0).all(); };
  if (!positive(velocity_std) || !positive(displacement_std) ||
      !positive(contact_std)) {
    throw ConfigError("measurement noise std must be positive");
  }
}

double wheel_speed(const ImuSample& imu, const WheelGeometry& g) {
  return g.forward_sign * imu.gyro.x() * g.radius;
}

Vec3 velocity_obs_vframe(double speed) { return Vec3(speed, 0.0, 0.0); }

Vec3 predicted_wheel_velocity(const NavState& nav, const ImuSample& imu,
                              const WheelGeometry& g, Frame frame) {
  const Vec3 v_n = nav.velocity + nav.attitude * imu.gyro.cross(g.lever_arm);
  if (frame == Frame::Nav) return v_n;
  return geom::dcm_nav_to_vehicle(
             geom::vehicle_heading_from_attitude(nav.attitude)) *
         v_n;
}

Mat3 attitude_error_to_euler_jacobian(const Dcm& c_bn) {
  const geom::EulerAngles e = geom::euler_from_dcm(c_bn);
  const double cp = std::cos(e.pitch), tp = std::tan(e.pitch);
  const double ch = std::cos(e.heading), sh = std::sin(e.heading);
  // Inverse of the Euler-rate to n-frame rotation-rate map, negated because
  // the estimate carries the rotation -phi.
  Mat3 t;
  t << ch / cp, sh / cp, 0.0,
       -sh, ch, 0.0,
       tp * ch, tp * sh, 1.0;
  return -t;
}

namespace {

void require_kind(const MeasurementConfig& cfg, ModelKind kind) {
  if (cfg.kind != kind) {
    throw std::invalid_argument("measurement config is for model " +
                                std::string(to_string(cfg.kind)));
  }
}

Mat3 variance(const Vec3& std_dev) {
  return std_dev.cwiseAbs2().asDiagonal();
}

// Gyro-error columns shared by every lever-arm projection.
void set_gyro_columns(Jacobian& h, const Mat3& pre, const Vec3& lever,
                      const Vec3& gyro) {
  const Mat3 block = -pre * geom::skew(lever);
  h.block<3, 3>(0, kGyroBias) = block;
  h.block<3, 3>(0, kGyroScale) = block * gyro.asDiagonal();
}

}  // namespace

Innovation velocity_innovation(const NavState& nav, const ImuSample& imu,
                               const WheelGeometry& g,
                               const MeasurementConfig& cfg) {
  require_kind(cfg, ModelKind::Velocity);
  const Dcm& c = nav.attitude;
  const Vec3 lever_vel = c * imu.gyro.cross(g.lever_arm);
  const Vec3 wheel_vel = nav.velocity + lever_vel;
  const Mat3 c_nv =
      geom::dcm_nav_to_vehicle(geom::vehicle_heading_from_attitude(c));
  const Mat3 t = attitude_error_to_euler_jacobian(c);

  Innovation in;
  in.z = c_nv * wheel_vel - velocity_obs_vframe(wheel_speed(imu, g));
  in.H.block<3, 3>(0, kVel) = c_nv;
  in.H.block<3, 3>(0, kAtt) =
      c_nv * geom::skew(lever_vel) +
      (c_nv * geom::skew(wheel_vel) * Vec3::UnitZ()) * t.row(2);
  set_gyro_columns(in.H, c_nv * c, g.lever_arm, imu.gyro);
  in.R = variance(cfg.velocity_std);
  return in;
}

DisplacementAccumulator DisplacementAccumulator::starting_at(double time) {
  DisplacementAccumulator acc;
  acc.start_time = time;
  acc.last_time = time;
  return acc;
}

DisplacementAccumulator accumulate_displacement(DisplacementAccumulator acc,
                                                const NavState& nav,
                                                const ImuSample& imu,
                                                const WheelGeometry& g) {
  const double dt = imu.time - acc.last_time;
  if (!(dt > 0.0)) throw NonMonotonicTime(acc.last_time, imu.time);

  const Dcm& c = nav.attitude;
  const double psi_v = geom::vehicle_heading_from_attitude(c);
  const Vec3 projected = geom::dcm_from_euler(geom::vehicle_euler(psi_v)) *
                         velocity_obs_vframe(wheel_speed(imu, g));
  const Vec3 lever_vel = c * imu.gyro.cross(g.lever_arm);
  const Mat3 t = attitude_error_to_euler_jacobian(c);

  Jacobian h = Jacobian::Zero();
  h.block<3, 3>(0, kVel).setIdentity();
  h.block<3, 3>(0, kAtt) = geom::skew(lever_vel) +
                           (geom::skew(projected) * Vec3::UnitZ()) * t.row(2);
  set_gyro_columns(h, c, g.lever_arm, imu.gyro);

  acc.measured += projected * dt;
  acc.predicted += (nav.velocity + lever_vel) * dt;
  acc.H += h * dt;
  acc.velocity_increment += c * imu.accel * dt;
  acc.attitude_integral += c * dt;
  acc.scaled_attitude_integral += c * imu.accel.asDiagonal() * dt;
  acc.last_time = imu.time;
  ++acc.epochs;
  return acc;
}

Innovation displacement_innovation(DisplacementAccumulator& acc,
                                   const MeasurementConfig& cfg) {
  require_kind(cfg, ModelKind::DisplacementIncrement);
  if (acc.epochs == 0) throw EmptyInterval();

  Innovation in;
  in.z = acc.predicted - acc.measured;
  in.H = acc.H;
  if (cfg.half_interval_correction) {
    // The velocity error at the update epoch overstates its mean over the
    // interval by half the error growth, integrated from the error dynamics.
    const double half = 0.5 * (acc.last_time - acc.start_time);
    in.H.block<3, 3>(0, kAtt) -= half * geom::skew(acc.velocity_increment);
    in.H.block<3, 3>(0, filter::kAccelBias) -= half * acc.attitude_integral;
    in.H.block<3, 3>(0, filter::kAccelScale) -=
        half * acc.scaled_attitude_integral;
  }
  in.R = variance(cfg.displacement_std);
  acc = DisplacementAccumulator::starting_at(acc.last_time);
  return in;
}

ContactLeverArm contact_lever_arm(const WheelGeometry& g, double roll) {
  const double s = std::sin(roll), c = std::cos(roll);
  return {g.lever_arm + g.radius * Vec3(0.0, s, c),
          g.radius * Vec3(0.0, c, -s)};
}

Innovation contact_innovation(const NavState& nav, const ImuSample& imu,
                              const WheelGeometry& g,
                              const MeasurementConfig& cfg) {
  require_kind(cfg, ModelKind::ContactPoint);
  const Dcm& c = nav.attitude;
  const double roll = std::atan2(c(2, 1), c(2, 2));
  const ContactLeverArm lp = contact_lever_arm(g, roll);
  const Vec3 lever_vel = c * imu.gyro.cross(lp.lever);
  const Mat3 t = attitude_error_to_euler_jacobian(c);

  Innovation in;
  // The contact point is at rest under rolling without slip.
  in.z = nav.velocity + lever_vel;
  in.H.block<3, 3>(0, kVel).setIdentity();
  in.H.block<3, 3>(0, kAtt) =
      geom::skew(lever_vel) +
      (c * imu.gyro.cross(lp.d_lever_droll)) * t.row(0);
  set_gyro_columns(in.H, c, lp.lever, imu.gyro);
  in.R = variance(cfg.contact_std);
  return in;
}

}  // namespace wheelins::meas

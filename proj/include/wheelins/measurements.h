#pragma once

#include <string_view>

#include "wheelins/filter.h"
#include "wheelins/mechanization.h"

namespace wheelins::meas {

struct WheelGeometry {
  double radius = 0.3;
  // Wheel center relative to the IMU, b-frame.
  Vec3 lever_arm = Vec3(0.0, 0.01, 0.02);
  // wheel speed = forward_sign * gyro_x * radius. With the b-frame x axis
  // pointing to the right of the vehicle, forward rolling spins the wheel
  // about -x, hence -1.
  int forward_sign = -1;

  void validate() const;
};

enum class ModelKind { Velocity, DisplacementIncrement, ContactPoint };

std::string_view to_string(ModelKind kind);
/// Accepts "velocity", "displacement", "contact".
ModelKind parse_model_kind(std::string_view name);

struct MeasurementConfig {
  ModelKind kind = ModelKind::Velocity;
  double update_rate = 2.0;                   // Hz
  Vec3 velocity_std = Vec3::Constant(0.05);   // m/s
  Vec3 displacement_std = Vec3::Constant(0.025);  // m per interval
  Vec3 contact_std = Vec3::Constant(0.05);    // m/s
  // Trapezoidal velocity-error refinement of the displacement model.
  bool half_interval_correction = false;

  void validate() const;
};

using Jacobian = Eigen::Matrix<double, 3, filter::kStateDim>;

struct Innovation {
  Vec3 z = Vec3::Zero();
  Jacobian H = Jacobian::Zero();
  Mat3 R = Mat3::Identity();
};

enum class Frame { Nav, Vehicle };

/// Forward wheel speed from the compensated x-axis rate.
double wheel_speed(const ImuSample& imu, const WheelGeometry& g);

/// Wheel speed plus the two non-holonomic zeros, v-frame.
Vec3 velocity_obs_vframe(double speed);

/// INS-indicated wheel-center velocity v + C (w x l), in n or v frame.
Vec3 predicted_wheel_velocity(const NavState& nav, const ImuSample& imu,
                              const WheelGeometry& g, Frame frame);

/// Rows map phi (under the (I - phi x) estimate convention) to
/// (roll, pitch, heading) errors of the estimate. Throws GimbalLock.
Mat3 attitude_error_to_euler_jacobian(const Dcm& c_bn);

Innovation velocity_innovation(const NavState& nav, const ImuSample& imu,
                               const WheelGeometry& g,
                               const MeasurementConfig& cfg);

// Running integrals between two displacement updates.
struct DisplacementAccumulator {
  double start_time = 0.0;
  double last_time = 0.0;
  Vec3 measured = Vec3::Zero();   // integral of projected wheel velocity
  Vec3 predicted = Vec3::Zero();  // integral of INS wheel-center velocity
  Jacobian H = Jacobian::Zero();
  int epochs = 0;
  // Only consumed by the half-interval correction.
  Vec3 velocity_increment = Vec3::Zero();  // integral of C f
  Mat3 attitude_integral = Mat3::Zero();   // integral of C
  Mat3 scaled_attitude_integral = Mat3::Zero();  // integral of C diag(f)

  static DisplacementAccumulator starting_at(double time);
};

/// Adds the interval (acc.last_time, imu.time] using the state at its end.
DisplacementAccumulator accumulate_displacement(DisplacementAccumulator acc,
                                                const NavState& nav,
                                                const ImuSample& imu,
                                                const WheelGeometry& g);

/// Innovation over the accumulated interval; restarts acc at its last
/// epoch. Throws EmptyInterval if nothing was accumulated.
Innovation displacement_innovation(DisplacementAccumulator& acc,
                                   const MeasurementConfig& cfg);

struct ContactLeverArm {
  Vec3 lever;          // IMU to contact point, b-frame
  Vec3 d_lever_droll;  // derivative w.r.t. the IMU roll angle
};

ContactLeverArm contact_lever_arm(const WheelGeometry& g, double roll);

Innovation contact_innovation(const NavState& nav, const ImuSample& imu,
                              const WheelGeometry& g,
                              const MeasurementConfig& cfg);

}  // namespace wheelins::meas

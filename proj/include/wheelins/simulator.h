#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wheelins/measurements.h"
#include "wheelins/mechanization.h"

namespace wheelins::sim {

// Constant heading rate, forward speed ramping linearly from start to end.
struct Segment {
  double duration = 0.0;     // s
  double start_speed = 0.0;  // m/s
  double end_speed = 0.0;    // m/s
  double heading_rate = 0.0; // rad/s, positive turns right (NED)

  double distance() const { return 0.5 * (start_speed + end_speed) * duration; }
};

struct TrajectoryProfile {
  std::string name;
  std::vector<Segment> segments;
  Vec3 initial_position = Vec3::Zero();  // wheel center, n-frame
  double initial_heading = 0.0;          // vehicle heading, rad

  double duration() const;
  double distance() const;
  void validate() const;
};

/// Wheel-speed-only course: static, ramp, straight, ramp, static.
TrajectoryProfile straight_profile(double length, double speed,
                                   double static_time = 10.0);

/// Rounded-rectangle laps with a static prefix and suffix.
TrajectoryProfile loop_profile(std::string name, double length, double width,
                               double corner_radius, double speed, int laps,
                               double static_time = 10.0);

/// "test1" (~1.2 km at 1.39 m/s), "test5" (~12 km at 4.7 m/s),
/// "straight" (1 km at 1.39 m/s). Throws ConfigError otherwise.
TrajectoryProfile profile_by_name(std::string_view name);

enum class BiasModel { Constant, GaussMarkov };

struct SensorErrorSpec {
  double gyro_bias_degph = 0.0;
  double arw_deg_sqrth = 0.0;
  double accel_bias_mps2 = 0.0;
  double vrw_mps_sqrth = 0.0;
  double gyro_scale_ppm = 0.0;
  double accel_scale_ppm = 0.0;
  BiasModel bias_model = BiasModel::Constant;
  double bias_correlation_time = 3600.0;  // s, Gauss-Markov only

  static SensorErrorSpec ideal() { return {}; }
  static SensorErrorSpec icm20602();
  void validate() const;
};

struct TruthEpoch {
  double time = 0.0;
  Vec3 center_position = Vec3::Zero();  // wheel center, n-frame
  Vec3 center_velocity = Vec3::Zero();
  double vehicle_heading = 0.0;
  double vehicle_pitch = 0.0;
  double speed = 0.0;        // along the vehicle forward axis
  double wheel_angle = 0.0;  // rotation about the axle
  double wheel_rate = 0.0;
  NavState imu;              // Wheel-IMU position, velocity, C_b^n
  Vec3 gyro = Vec3::Zero();  // exact b-frame rate
  Vec3 accel = Vec3::Zero(); // exact b-frame specific force
};

struct TruthOptions {
  double slope = 0.0;  // constant grade, rad, positive climbs
  geom::MountingAngles mounting;
  // IMU fixed to the vehicle at the same place instead of spinning.
  bool body_mounted = false;
  double gravity = kDefaultGravity;
};

/// Samples the profile at `rate` (>= 50 Hz). The geometry's forward_sign
/// must match the frame layout (-1); +1 cannot roll without slipping.
std::vector<TruthEpoch> generate_truth(const TrajectoryProfile& profile,
                                       const meas::WheelGeometry& g,
                                       double rate,
                                       const TruthOptions& options = {});

/// Increment-consistent IMU samples: propagating them with
/// mech::propagate reproduces the truth attitude and velocity at every
/// output epoch. `rate` must divide the truth rate.
std::vector<ImuSample> synthesize_imu(const std::vector<TruthEpoch>& truth,
                                      double rate,
                                      double gravity = kDefaultGravity);

struct Corrupted {
  std::vector<ImuSample> samples;
  // Biases at the first sample and the scale factors.
  SensorErrors injected;
};

Corrupted corrupt(const std::vector<ImuSample>& samples,
                  const SensorErrorSpec& spec, std::uint64_t seed);

meas::WheelGeometry inject_lever_arm_error(const meas::WheelGeometry& g,
                                           double dy, double dz);

}  // namespace wheelins::sim

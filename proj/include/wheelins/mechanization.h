#pragma once

#include <span>

#include "wheelins/geom.h"

namespace wheelins {

inline constexpr double kDefaultGravity = 9.80665;

// One IMU epoch. The rate and specific force are the averages over the
// interval that ends at `time` (increment-type sensor convention).
struct ImuSample {
  double time = 0.0;
  Vec3 gyro = Vec3::Zero();   // rad/s, b-frame
  Vec3 accel = Vec3::Zero();  // m/s^2, b-frame
};

// Position and velocity of the IMU in a local NED frame anchored at the
// start pose; attitude is C_b^n.
struct NavState {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Dcm attitude = Dcm::Identity();
};

// Sensor error estimates used to compensate raw IMU output.
struct SensorErrors {
  Vec3 gyro_bias = Vec3::Zero();
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_scale = Vec3::Zero();
  Vec3 accel_scale = Vec3::Zero();
};

namespace mech {

ImuSample compensate(const ImuSample& s, const SensorErrors& e);

/// Advances nav over (prev.time, curr.time] with a compensated sample.
/// Flat-frame mechanization: no earth rate, no transport rate. Throws
/// NonMonotonicTime when curr.time <= prev.time.
NavState propagate(const NavState& nav, const ImuSample& prev,
                   const ImuSample& curr, double gravity = kDefaultGravity);

struct Alignment {
  double roll = 0.0;
  double pitch = 0.0;
  Vec3 gyro_bias = Vec3::Zero();
};

inline constexpr double kMinAlignmentWindow = 1.0;
inline constexpr double kMotionThreshold = 0.05;

/// Leveling and gyro-bias estimate from a stationary window. The motion
/// test compares the per-axis standard deviation of the specific force
/// against `motion_threshold` (m/s^2).
Alignment static_align(std::span<const ImuSample> window,
                       double motion_threshold = kMotionThreshold);

}  // namespace mech
}  // namespace wheelins

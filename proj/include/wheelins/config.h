#pragma once

#include <cstdint>
#include <string>

#include "wheelins/filter.h"
#include "wheelins/measurements.h"
#include "wheelins/simulator.h"

namespace wheelins {

// Datasheet-unit noise figures the filter is tuned with.
struct NoiseFigures {
  double gyro_bias_degph = 200.0;
  double arw_deg_sqrth = 0.24;
  double accel_bias_mps2 = 0.01;
  double vrw_mps_sqrth = 3.0;
  double gyro_scale_ppm = 1000.0;
  double accel_scale_ppm = 1000.0;
  double bias_correlation_time = 3600.0;
  double scale_correlation_time = 3600.0;

  filter::ProcessNoiseConfig process_noise() const;
};

struct InitialStateConfig {
  double position_std = 0.01;    // m
  double velocity_std = 0.05;    // m/s
  double tilt_std_deg = 0.5;
  double heading_std_deg = 1.0;
  Vec3 position_offset = Vec3::Zero();
  Vec3 velocity_offset = Vec3::Zero();
  double heading_offset_deg = 0.0;
};

struct SimConfig {
  std::string profile = "test1";
  std::string preset = "icm20602";
  sim::SensorErrorSpec errors = sim::SensorErrorSpec::icm20602();
  double slope_deg = 0.0;
  double mounting_pitch_deg = 0.0;
  double mounting_heading_deg = 0.0;
  bool body_mounted = false;
  double truth_rate = 50.0;  // Hz, rate of the written truth files
};

struct RunConfig {
  meas::MeasurementConfig measurement;  // model kind and update rate
  double imu_rate = 200.0;
  double output_rate = 20.0;
  meas::WheelGeometry geometry;
  // Applied to the estimator's lever arm only.
  double lever_arm_error_y = 0.0;
  double lever_arm_error_z = 0.0;
  NoiseFigures noise;
  InitialStateConfig initial;
  double align_window = 8.0;  // s
  // Added to three times the per-sample accelerometer noise.
  double motion_threshold = mech::kMotionThreshold;
  bool estimate_gyro_bias = true;
  double time_offset = 0.0;  // s, added to IMU timestamps
  double segment_length = 100.0;
  double divergence_ceiling = 1e4;  // m^2
  bool gate = false;
  double gate_threshold = 25.0;
  std::uint64_t seed = 0;
  SimConfig sim;

  // Cross-field checks; throws ConfigError.
  void validate() const;
  meas::WheelGeometry estimator_geometry() const;
};

/// Applies key=value lines on top of `base`. Blank lines and '#' comments
/// are skipped. Unknown keys and malformed values are errors.
RunConfig parse_config(const std::string& text, const std::string& source,
                       RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Every key with its value; parse_config of the result reproduces cfg.
std::string format_config(const RunConfig& cfg);

/// Sets one key. Throws ConfigError for unknown keys and
/// std::invalid_argument for malformed values.
void set_config_value(RunConfig& cfg, const std::string& key,
                      const std::string& value);

}  // namespace wheelins

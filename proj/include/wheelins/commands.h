#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wheelins/config.h"
#include "wheelins/eval.h"
#include "wheelins/pipeline.h"

namespace wheelins {

struct Dataset {
  std::vector<ImuSample> imu;
  eval::Trajectory truth_imu;      // yaw = IMU heading
  eval::Trajectory truth_vehicle;  // wheel center, yaw = vehicle heading
  SensorErrors injected;
};

/// Simulated, corrupted dataset for cfg.sim with the given seed.
Dataset simulate_dataset(const RunConfig& cfg, std::uint64_t seed);

struct CompareResult {
  std::array<RunRecord, 3> runs;  // velocity, displacement, contact
  eval::Comparison comparison;
};

/// Runs the three models on one dataset. Throws TooShort if any run covers
/// less than one segment.
CompareResult compare_runs(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                           const eval::Trajectory& reference);

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

struct SimulateArgs : CommonArgs {
  std::string profile;
};

struct RunArgs : CommonArgs {
  std::string imu_path;
  std::string reference_path;
  std::string reference_heading = "imu";
  std::string model;
  std::vector<std::string> flags;  // eq18, gate
  std::optional<std::array<double, 2>> lever_arm_error;
};

struct EvaluateArgs : CommonArgs {
  std::string estimate_path;
  std::string estimate_heading = "imu";
  std::string reference_path;
  std::string reference_heading = "imu";
};

struct CompareArgs : RunArgs {
  std::string profile;  // simulate in memory when no IMU file is given
};

// Each command writes its files into out_dir and throws on failure, in
// which case nothing it wrote is left behind.
void simulate_cmd(const SimulateArgs& args);
void run_cmd(const RunArgs& args);
void evaluate_cmd(const EvaluateArgs& args);
void compare_cmd(const CompareArgs& args);

}  // namespace wheelins

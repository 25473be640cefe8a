#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wheelins/config.h"
#include "wheelins/eval.h"
#include "wheelins/filter.h"

namespace wheelins {

struct RunRecord {
  RunConfig config;
  std::vector<eval::TrajectoryRecord> estimate;  // IMU heading convention
  eval::ErrorSeries errors;
  // Absent when the run covers less than one segment.
  std::optional<eval::DriftReport> report;
  SensorErrors final_sensors;
  std::size_t updates = 0;
  std::size_t rejected = 0;
  double elapsed_seconds = 0.0;  // wall clock, never written to files
};

struct InitialState {
  std::size_t index = 0;  // IMU sample the navigation starts from
  NavState nav;
  SensorErrors sensors;
  filter::Covariance P;
};

/// Static alignment on the first align.window seconds, then position,
/// velocity and heading from the reference at the end of the window.
InitialState initialize(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                        const eval::Trajectory& reference);

/// Filter run with the configured measurement model. Throws
/// DivergenceError when the horizontal position variance passes
/// divergence.ceiling.
RunRecord run_pipeline(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                       const eval::Trajectory& reference);

/// Same initialization and output, no measurement updates.
RunRecord run_ins(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                  const eval::Trajectory& reference);

}  // namespace wheelins

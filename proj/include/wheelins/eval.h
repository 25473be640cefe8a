#pragma once

#include <array>
#include <string>
#include <vector>

#include "wheelins/geom.h"
#include "wheelins/mechanization.h"

namespace wheelins::eval {

// Which heading the yaw column of a trajectory holds.
enum class HeadingConvention { Imu, Vehicle };

// One row of a trajectory file.
struct TrajectoryRecord {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  HeadingConvention heading = HeadingConvention::Imu;
};

/// Record of an IMU navigation state; yaw is the IMU heading.
TrajectoryRecord to_record(const NavState& nav);

/// Linear interpolation with shortest-arc angles. t is clamped to the
/// record span.
TrajectoryRecord interpolate(const std::vector<TrajectoryRecord>& records,
                             double t);

struct ErrorSample {
  double time = 0.0;
  Vec3 position = Vec3::Zero();  // estimate - reference, NED
  double horizontal = 0.0;
  double heading = 0.0;          // vehicle heading error, (-pi, pi]
  double distance = 0.0;         // reference distance since the first sample
};

using ErrorSeries = std::vector<ErrorSample>;

/// Estimate samples outside the reference span are dropped. Throws
/// NoOverlap when none remain.
ErrorSeries align_and_diff(const Trajectory& estimate,
                           const Trajectory& reference);

inline constexpr double kDefaultSegmentLength = 100.0;

struct DriftReport {
  double segment_length = kDefaultSegmentLength;  // m
  std::vector<double> rates;  // %
  double mean = 0.0;          // %
  double std_dev = 0.0;       // %, across segments
  double heading_max = 0.0;   // deg
  double heading_rmse = 0.0;  // deg
};

/// Position part of the report. Throws TooShort when the series covers
/// less than one segment.
DriftReport drift_rate(const ErrorSeries& series,
                       double segment_length = kDefaultSegmentLength);

struct HeadingStats {
  double max = 0.0;   // deg
  double rmse = 0.0;  // deg
};

/// Throws EmptySeries.
HeadingStats heading_stats(const ErrorSeries& series);

/// drift_rate plus heading_stats.
DriftReport make_report(const ErrorSeries& series,
                        double segment_length = kDefaultSegmentLength);

struct Comparison {
  std::array<std::string, 3> names{"velocity", "displacement", "contact"};
  std::array<DriftReport, 3> reports;
  // MEAN ratios velocity/displacement, velocity/contact,
  // displacement/contact.
  std::array<double, 3> ratios{1.0, 1.0, 1.0};
  bool out_of_parity = false;  // some ratio outside [0.5, 2]
};

double mean_ratio(double a, double b);

Comparison compare_models(const std::array<DriftReport, 3>& reports);

/// key=value lines, one per field.
std::string format_report(const DriftReport& r);
std::string report_csv_header();
std::string report_csv_row(const std::string& label, const DriftReport& r);
std::string format_comparison(const Comparison& c);

}  // namespace wheelins::eval

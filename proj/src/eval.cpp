#include "wheelins/eval.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wheelins/errors.h"
#include "wheelins/number_format.h"

namespace wheelins::eval {

TrajectoryRecord to_record(const NavState& nav) {
  const geom::EulerAngles e = geom::euler_from_dcm(nav.attitude);
  return {nav.time, nav.position, nav.velocity, e.roll, e.pitch, e.heading};
}

TrajectoryRecord interpolate(const std::vector<TrajectoryRecord>& records,
                             double t) {
  if (records.empty()) throw NoOverlap();
  if (t <= records.front().time) return records.front();
  if (t >= records.back().time) return records.back();
  const auto hi = std::upper_bound(
      records.begin(), records.end(), t,
      [](double x, const TrajectoryRecord& r) { return x < r.time; });
  const TrajectoryRecord& b = *hi;
  const TrajectoryRecord& a = *(hi - 1);
  const double span = b.time - a.time;
  const double u = span > 0.0 ? (t - a.time) / span : 0.0;
  const auto angle = [u](double x, double y) {
    return geom::wrap_angle(x + u * geom::angle_diff(y, x));
  };
  TrajectoryRecord r;
  r.time = t;
  r.position = a.position + u * (b.position - a.position);
  r.velocity = a.velocity + u * (b.velocity - a.velocity);
  r.roll = angle(a.roll, b.roll);
  r.pitch = a.pitch + u * (b.pitch - a.pitch);
  r.yaw = angle(a.yaw, b.yaw);
  return r;
}

namespace {

double vehicle_yaw(double yaw, HeadingConvention c) {
  return c == HeadingConvention::Imu ? geom::vehicle_heading_from_imu(yaw)
                                     : geom::wrap_angle(yaw);
}

}  // namespace

ErrorSeries align_and_diff(const Trajectory& estimate,
                           const Trajectory& reference) {
  const auto& ref = reference.records;
  if (ref.empty() || estimate.records.empty()) throw NoOverlap();

  // Reference distance at each knot, trapezoid on horizontal speed.
  std::vector<double> knots(ref.size(), 0.0);
  for (std::size_t j = 1; j < ref.size(); ++j) {
    const double s0 = ref[j - 1].velocity.head<2>().norm();
    const double s1 = ref[j].velocity.head<2>().norm();
    knots[j] = knots[j - 1] + 0.5 * (s0 + s1) * (ref[j].time - ref[j - 1].time);
  }
  const auto distance_at = [&](double t) {
    const auto hi = std::upper_bound(
        ref.begin(), ref.end(), t,
        [](double x, const TrajectoryRecord& r) { return x < r.time; });
    if (hi == ref.begin()) return knots.front();
    if (hi == ref.end()) return knots.back();
    const std::size_t j = static_cast<std::size_t>(hi - ref.begin());
    const double u = (t - ref[j - 1].time) / (ref[j].time - ref[j - 1].time);
    return knots[j - 1] + u * (knots[j] - knots[j - 1]);
  };

  const double tol = 1e-9;
  ErrorSeries out;
  double origin = 0.0;
  for (const auto& e : estimate.records) {
    if (e.time < ref.front().time - tol || e.time > ref.back().time + tol) continue;
    const TrajectoryRecord r = interpolate(ref, e.time);
    ErrorSample s;
    s.time = e.time;
    s.position = e.position - r.position;
    s.horizontal = s.position.head<2>().norm();
    s.heading = geom::angle_diff(vehicle_yaw(e.yaw, estimate.heading),
                                 vehicle_yaw(r.yaw, reference.heading));
    const double d = distance_at(e.time);
    if (out.empty()) origin = d;
    s.distance = d - origin;
    out.push_back(s);
  }
  if (out.empty()) throw NoOverlap();
  return out;
}

DriftReport drift_rate(const ErrorSeries& series, double segment_length) {
  if (!(segment_length > 0.0)) throw std::invalid_argument("segment length must be positive");
  double total = 0.0;
  for (const auto& s : series) total = std::max(total, s.distance);
  const auto segments =
      static_cast<std::size_t>(std::floor(total / segment_length + 1e-9));
  if (segments == 0) throw TooShort(total, segment_length);

  DriftReport r;
  r.segment_length = segment_length;
  // Distance is non-decreasing along the series, so one sweep suffices.
  std::size_t i = 0;
  double worst = 0.0;
  for (std::size_t k = 1; k <= segments; ++k) {
    const double d = static_cast<double>(k) * segment_length;
    while (i < series.size() && series[i].distance <= d * (1.0 + 1e-12)) {
      worst = std::max(worst, series[i].horizontal);
      ++i;
    }
    r.rates.push_back(100.0 * worst / d);
  }
  double sum = 0.0;
  for (double x : r.rates) sum += x;
  r.mean = sum / static_cast<double>(segments);
  double var = 0.0;
  for (double x : r.rates) var += (x - r.mean) * (x - r.mean);
  r.std_dev = std::sqrt(var / static_cast<double>(segments));
  return r;
}

HeadingStats heading_stats(const ErrorSeries& series) {
  if (series.empty()) throw EmptySeries();
  double max = 0.0, sq = 0.0;
  for (const auto& s : series) {
    const double h = geom::wrap_angle(s.heading);
    max = std::max(max, std::abs(h));
    sq += h * h;
  }
  const double to_deg = 180.0 / geom::kPi;
  return {max * to_deg, std::sqrt(sq / static_cast<double>(series.size())) * to_deg};
}

DriftReport make_report(const ErrorSeries& series, double segment_length) {
  DriftReport r = drift_rate(series, segment_length);
  const HeadingStats h = heading_stats(series);
  r.heading_max = h.max;
  r.heading_rmse = h.rmse;
  return r;
}

double mean_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return a / b;
}

Comparison compare_models(const std::array<DriftReport, 3>& reports) {
  Comparison c;
  c.reports = reports;
  c.ratios = {mean_ratio(reports[0].mean, reports[1].mean),
              mean_ratio(reports[0].mean, reports[2].mean),
              mean_ratio(reports[1].mean, reports[2].mean)};
  for (double x : c.ratios) {
    if (!(x >= 0.5 && x <= 2.0)) c.out_of_parity = true;
  }
  return c;
}

std::string format_report(const DriftReport& r) {
  std::string s;
  s += "segment_length_m=" + format_number(r.segment_length) + "\n";
  s += "segments=" + std::to_string(r.rates.size()) + "\n";
  s += "drift_mean_pct=" + format_number(r.mean) + "\n";
  s += "drift_std_pct=" + format_number(r.std_dev) + "\n";
  s += "heading_max_deg=" + format_number(r.heading_max) + "\n";
  s += "heading_rmse_deg=" + format_number(r.heading_rmse) + "\n";
  s += "drift_rates_pct=";
  for (std::size_t i = 0; i < r.rates.size(); ++i) {
    if (i) s += ';';
    s += format_number(r.rates[i]);
  }
  s += "\n";
  return s;
}

std::string report_csv_header() {
  return "label,segment_length_m,segments,drift_mean_pct,drift_std_pct,"
         "heading_max_deg,heading_rmse_deg\n";
}

std::string report_csv_row(const std::string& label, const DriftReport& r) {
  return label + "," + format_number(r.segment_length) + "," +
         std::to_string(r.rates.size()) + "," + format_number(r.mean) + "," +
         format_number(r.std_dev) + "," + format_number(r.heading_max) + "," +
         format_number(r.heading_rmse) + "\n";
}

std::string format_comparison(const Comparison& c) {
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string& n = c.names[i];
    const DriftReport& r = c.reports[i];
    s += n + ".drift_mean_pct=" + format_number(r.mean) + "\n";
    s += n + ".drift_std_pct=" + format_number(r.std_dev) + "\n";
    s += n + ".heading_max_deg=" + format_number(r.heading_max) + "\n";
    s += n + ".heading_rmse_deg=" + format_number(r.heading_rmse) + "\n";
  }
  const char* pairs[3] = {"velocity_displacement", "velocity_contact",
                          "displacement_contact"};
  for (std::size_t i = 0; i < 3; ++i) {
    s += std::string("ratio.") + pairs[i] + "=" + format_number(c.ratios[i]) + "\n";
  }
  s += std::string("out_of_parity=") + (c.out_of_parity ? "1" : "0") + "\n";
  return s;
}

}  // namespace wheelins::eval

#include <gtest/gtest.h>

#include "oracles.h"
#include "wheelins/errors.h"
#include "wheelins/eval.h"

using namespace wheelins;
using namespace wheelins::eval;
using geom::kDeg;
using geom::kPi;

namespace {

// Straight run north at `speed`, yaw given in the vehicle convention.
Trajectory line(double speed, double seconds, double rate, double yaw = 0.0) {
  Trajectory t;
  t.heading = HeadingConvention::Vehicle;
  const int n = static_cast<int>(seconds * rate);
  for (int i = 0; i <= n; ++i) {
    TrajectoryRecord r;
    r.time = i / rate;
    r.position = Vec3(speed * r.time, 0, 0);
    r.velocity = Vec3(speed, 0, 0);
    r.yaw = yaw;
    t.records.push_back(r);
  }
  return t;
}

ErrorSeries series_from(const std::vector<std::pair<double, double>>& dist_err) {
  ErrorSeries s;
  for (const auto& [d, e] : dist_err) {
    ErrorSample x;
    x.time = d;
    x.distance = d;
    x.horizontal = e;
    x.position = Vec3(e, 0, 0);
    s.push_back(x);
  }
  return s;
}

// Brute-force drift rates: for each whole segment, the worst horizontal
// error seen up to that distance, as a percentage of it.
std::vector<double> oracle_rates(const ErrorSeries& s, double len) {
  double total = 0;
  for (const auto& x : s) total = std::max(total, x.distance);
  std::vector<double> out;
  for (int k = 1; k * len <= total + 1e-9; ++k) {
    double worst = 0;
    for (const auto& x : s) {
      if (x.distance <= k * len + 1e-9) worst = std::max(worst, x.horizontal);
    }
    out.push_back(100 * worst / (k * len));
  }
  return out;
}

DriftReport with_mean(double m) {
  DriftReport r;
  r.mean = m;
  return r;
}

}  // namespace

TEST(AlignAndDiff, IdenticalTrajectoriesHaveNoError) {
  const auto t = line(1.5, 100, 10);
  const auto s = align_and_diff(t, t);
  ASSERT_EQ(s.size(), t.records.size());
  for (const auto& x : s) {
    EXPECT_EQ(x.horizontal, 0.0);
    EXPECT_EQ(x.heading, 0.0);
  }
  EXPECT_NEAR(s.back().distance, 150.0, 1e-9);
  const auto r = make_report(s);
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.std_dev, 0.0);
  EXPECT_EQ(r.heading_rmse, 0.0);
}

TEST(AlignAndDiff, ConstantOffset) {
  const auto ref = line(1.0, 300, 5);
  auto est = ref;
  for (auto& r : est.records) r.position.x() += 1.0;
  const auto s = align_and_diff(est, ref);
  for (const auto& x : s) EXPECT_NEAR(x.horizontal, 1.0, 1e-12);
  const auto r = drift_rate(s);
  ASSERT_EQ(r.rates.size(), 3u);
  EXPECT_NEAR(r.rates[0], 1.0, 1e-12);
  EXPECT_NEAR(r.rates[2], 1.0 / 3, 1e-12);
}

TEST(AlignAndDiff, InterpolatesReferenceAtEstimateTimes) {
  const auto ref = line(2.0, 100, 2);
  auto est = line(2.0, 100, 20);
  const auto s = align_and_diff(est, ref);
  for (const auto& x : s) ASSERT_LT(x.horizontal, 1e-9);
  // Estimate samples outside the reference span are dropped.
  for (auto& r : est.records) r.time += 50;
  EXPECT_LT(align_and_diff(est, ref).size(), est.records.size());
  for (auto& r : est.records) r.time += 1000;
  EXPECT_THROW(align_and_diff(est, ref), NoOverlap);
}

TEST(AlignAndDiff, HeadingWrapsAndConventions) {
  auto ref = line(1, 10, 1, -179 * kDeg);
  auto est = line(1, 10, 1, 179 * kDeg);
  const auto s = align_and_diff(est, ref);
  EXPECT_NEAR(std::abs(s[0].heading), 2 * kDeg, 1e-12);
  // IMU yaw is the vehicle yaw plus a quarter turn.
  auto imu = est;
  imu.heading = HeadingConvention::Imu;
  for (auto& r : imu.records) r.yaw = geom::wrap_angle(r.yaw + kPi / 2);
  const auto s2 = align_and_diff(imu, ref);
  EXPECT_NEAR(s2[3].heading, s[3].heading, 1e-12);
}

TEST(Interpolate, ShortestArc) {
  TrajectoryRecord a, b;
  a.time = 0;
  b.time = 1;
  a.yaw = 170 * kDeg;
  b.yaw = -170 * kDeg;
  const auto m = interpolate({a, b}, 0.5);
  EXPECT_NEAR(std::abs(m.yaw), kPi, 1e-12);
  EXPECT_EQ(interpolate({a, b}, -5).yaw, a.yaw);
}

TEST(DriftRate, WorkedExample) {
  const auto s = series_from({{0, 0}, {50, 0.3}, {100, 0.5}, {150, 0.8}, {200, 0.6}});
  const auto r = drift_rate(s);
  ASSERT_EQ(r.rates.size(), 2u);
  EXPECT_NEAR(r.rates[0], 0.5, 1e-12);
  EXPECT_NEAR(r.rates[1], 0.4, 1e-12);
  EXPECT_NEAR(r.mean, 0.45, 1e-12);
  EXPECT_NEAR(r.std_dev, 0.05, 1e-12);
}

TEST(DriftRate, MatchesBruteForce) {
  oracle::Random rnd(61);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> pts;
    double d = 0;
    while (d < 1234) {
      pts.push_back({d, rnd.uniform(0, 5)});
      d += rnd.uniform(0, 3);
    }
    const auto s = series_from(pts);
    const double len = rnd.uniform(50, 300);
    const auto r = drift_rate(s, len);
    const auto want = oracle_rates(s, len);
    ASSERT_EQ(r.rates.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(r.rates[k], want[k], 1e-12);
  }
}

TEST(DriftRate, ScalesWithErrorAndSegmentStructure) {
  oracle::Random rnd(62);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 1000; ++i) pts.push_back({i * 1.0, rnd.uniform(0, 2)});
  const auto base = drift_rate(series_from(pts));
  auto doubled = pts;
  for (auto& p : doubled) p.second *= 2;
  const auto twice = drift_rate(series_from(doubled));
  EXPECT_NEAR(twice.mean, 2 * base.mean, 1e-12);
  EXPECT_NEAR(twice.std_dev, 2 * base.std_dev, 1e-12);
  for (std::size_t k = 0; k < base.rates.size(); ++k) {
    // The running maximum never decreases.
    if (k) {
      EXPECT_GE(base.rates[k] * (k + 1), base.rates[k - 1] * k - 1e-12);
    }
  }
}

TEST(DriftRate, ZeroErrorAndErrors) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 500; ++i) pts.push_back({i * 1.0, 0});
  const auto r = drift_rate(series_from(pts));
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.std_dev, 0.0);
  EXPECT_THROW(drift_rate(series_from({{0, 0}, {99, 1}})), TooShort);
  EXPECT_THROW(drift_rate(series_from(pts), 0.0), std::invalid_argument);
}

TEST(HeadingStats, Values) {
  ErrorSeries s(3);
  s[0].heading = 1 * kDeg;
  s[1].heading = -2 * kDeg;
  s[2].heading = 2 * kDeg;
  const auto h = heading_stats(s);
  EXPECT_NEAR(h.max, 2.0, 1e-12);
  EXPECT_NEAR(h.rmse, std::sqrt(3.0), 1e-12);
  for (auto& x : s) x.heading += 2 * kPi;
  EXPECT_NEAR(heading_stats(s).rmse, std::sqrt(3.0), 1e-9);
  EXPECT_THROW(heading_stats({}), EmptySeries);
}

TEST(Compare, Ratios) {
  const auto same = compare_models({with_mean(0.4), with_mean(0.4), with_mean(0.4)});
  for (double x : same.ratios) EXPECT_EQ(x, 1.0);
  EXPECT_FALSE(same.out_of_parity);

  const auto c = compare_models({with_mean(0.59), with_mean(0.66), with_mean(0.58)});
  for (double x : c.ratios) {
    EXPECT_GE(x, 0.88);
    EXPECT_LE(x, 1.14);
  }
  EXPECT_NEAR(c.ratios[0], 0.59 / 0.66, 1e-15);
  EXPECT_FALSE(c.out_of_parity);

  EXPECT_TRUE(compare_models({with_mean(1.0), with_mean(0.4), with_mean(0.5)}).out_of_parity);
  EXPECT_EQ(mean_ratio(0, 0), 1.0);
  EXPECT_TRUE(std::isinf(mean_ratio(1, 0)));
  EXPECT_TRUE(compare_models({with_mean(1.0), with_mean(0.0), with_mean(0.5)}).out_of_parity);
}

TEST(Format, ReportLines) {
  const auto r = drift_rate(series_from({{0, 0}, {100, 0.5}, {200, 0.8}}));
  const std::string text = format_report(r);
  EXPECT_NE(text.find("segments=2\n"), std::string::npos);
  EXPECT_NE(text.find("drift_mean_pct=0.45\n"), std::string::npos);
  EXPECT_NE(text.find("drift_rates_pct=0.5;0.4\n"), std::string::npos);
  EXPECT_EQ(report_csv_row("x", r), "x,100,2,0.45,0.05,0,0\n");
  const auto c = format_comparison(compare_models({r, r, r}));
  EXPECT_NE(c.find("ratio.velocity_contact=1\n"), std::string::npos);
  EXPECT_NE(c.find("out_of_parity=0\n"), std::string::npos);
}

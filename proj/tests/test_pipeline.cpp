#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wheelins/commands.h"
#include "wheelins/errors.h"
#include "wheelins/io.h"
#include "wheelins/pipeline.h"

using namespace wheelins;
namespace fs = std::filesystem;

namespace {

RunConfig ideal_config(meas::ModelKind kind) {
  RunConfig c;
  c.measurement.kind = kind;
  c.sim.preset = "ideal";
  c.sim.errors = {};
  return c;
}

const Dataset& ideal_test1() {
  static const Dataset d = simulate_dataset(ideal_config(meas::ModelKind::Velocity), 1);
  return d;
}

const Dataset& noisy_test1() {
  static const Dataset d = simulate_dataset(RunConfig{}, 3);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double value_of(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  if (at == std::string::npos) return std::nan("");
  return std::stod(text.substr(at + key.size() + 1));
}

int cli(const std::string& args) {
  const std::string cmd = std::string(WHEELINS_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wheelins_pipe_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

class NoiselessModel : public ::testing::TestWithParam<meas::ModelKind> {};

TEST_P(NoiselessModel, MeetsAccuracyFloor) {
  const auto& d = ideal_test1();
  const auto r = run_pipeline(ideal_config(GetParam()), d.imu, d.truth_imu);
  ASSERT_TRUE(r.report.has_value());
  EXPECT_LT(r.report->mean, 0.05);
  EXPECT_LT(r.report->heading_rmse, 0.05);
  EXPECT_GT(r.updates, 100u);
  EXPECT_EQ(r.rejected, 0u);
  EXPECT_EQ(r.estimate.size(), r.errors.size());
}

INSTANTIATE_TEST_SUITE_P(AllModels, NoiselessModel,
                         ::testing::Values(meas::ModelKind::Velocity,
                                           meas::ModelKind::DisplacementIncrement,
                                           meas::ModelKind::ContactPoint));

TEST(Pipeline, Initialization) {
  const auto& d = noisy_test1();
  const RunConfig cfg;
  const auto init = initialize(cfg, d.imu, d.truth_imu);
  EXPECT_NEAR(init.nav.time, cfg.align_window, 0.01);
  EXPECT_LT((init.nav.position - eval::interpolate(d.truth_imu.records, init.nav.time).position)
                .norm(), 1e-9);
  // Gyro bias from the static window is good to the ARW over 8 s.
  EXPECT_LT((init.sensors.gyro_bias - d.injected.gyro_bias).norm(), 2e-4);
  EXPECT_TRUE(init.P.isApprox(init.P.transpose()));

  RunConfig no_bias = cfg;
  no_bias.estimate_gyro_bias = false;
  EXPECT_TRUE(initialize(no_bias, d.imu, d.truth_imu).sensors.gyro_bias.isZero(0.0));
}

TEST(Pipeline, NoisyRunBeatsFreeInertial) {
  const auto& d = noisy_test1();
  const RunConfig cfg;
  const auto aided = run_pipeline(cfg, d.imu, d.truth_imu);
  const auto free = run_ins(cfg, d.imu, d.truth_imu);
  ASSERT_TRUE(aided.report && free.report);
  EXPECT_LT(aided.report->mean, 2.0);
  EXPECT_LT(aided.report->heading_rmse, 5.0);
  EXPECT_GT(free.report->mean, 10 * aided.report->mean);
  EXPECT_EQ(free.updates, 0u);
}

TEST(Pipeline, Deterministic) {
  const auto& d = noisy_test1();
  RunConfig cfg;
  cfg.measurement.kind = meas::ModelKind::ContactPoint;
  const auto a = run_pipeline(cfg, d.imu, d.truth_imu);
  const auto b = run_pipeline(cfg, d.imu, d.truth_imu);
  EXPECT_EQ(io::trajectory_csv(a.estimate), io::trajectory_csv(b.estimate));
  EXPECT_EQ(simulate_dataset(cfg, 9).imu.back().gyro, simulate_dataset(cfg, 9).imu.back().gyro);
}

TEST(Pipeline, Divergence) {
  const auto& d = noisy_test1();
  RunConfig cfg;
  cfg.divergence_ceiling = 1e-6;
  EXPECT_THROW(run_pipeline(cfg, d.imu, d.truth_imu), DivergenceError);
}

TEST(Pipeline, GateRejectsImplausibleUpdates) {
  const auto& d = noisy_test1();
  RunConfig cfg;
  cfg.gate = true;
  const auto plausible = run_pipeline(cfg, d.imu, d.truth_imu);
  EXPECT_LT(plausible.rejected * 20, plausible.updates);

  // A gate nothing passes leaves plain INS behind.
  cfg.gate_threshold = 1e-12;
  cfg.divergence_ceiling = 1e12;
  const auto r = run_pipeline(cfg, d.imu, d.truth_imu);
  EXPECT_EQ(r.updates, 0u);
  EXPECT_GT(r.rejected, 1000u);
  EXPECT_EQ(io::trajectory_csv(r.estimate),
            io::trajectory_csv(run_ins(cfg, d.imu, d.truth_imu).estimate));
}

TEST(Pipeline, ShortRunHasNoReport) {
  const auto& d = ideal_test1();
  const std::vector<ImuSample> head(d.imu.begin(), d.imu.begin() + 200 * 40);
  const auto r = run_pipeline(ideal_config(meas::ModelKind::Velocity), head, d.truth_imu);
  EXPECT_FALSE(r.report.has_value());
  EXPECT_FALSE(r.errors.empty());
  EXPECT_THROW(compare_runs(RunConfig{}, head, d.truth_imu), TooShort);
}

TEST(Pipeline, RejectsBadAlignmentWindow) {
  const auto& d = noisy_test1();
  RunConfig cfg;
  cfg.align_window = 15;  // the vehicle starts moving at 10 s
  EXPECT_THROW(run_pipeline(cfg, d.imu, d.truth_imu), MotionDetected);
}

TEST(Cli, SimulateRunEvaluateRoundTrip) {
  const fs::path dir = scratch("flow");
  const std::string out = dir.string();
  ASSERT_EQ(cli("simulate --profile straight --seed 4 --out " + out), 0);
  for (const char* f : {"imu.csv", "truth_imu.csv", "truth_vehicle.csv", "config.txt"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const fs::path run_dir = dir / "run";
  fs::create_directories(run_dir);
  ASSERT_EQ(cli("run --imu " + out + "/imu.csv --reference " + out +
                "/truth_imu.csv --model displacement --flag eq18 --seed 4 --out " +
                run_dir.string()),
            0);
  const std::string report = slurp(run_dir / "report.txt");
  EXPECT_NE(report.find("drift_mean_pct="), std::string::npos);
  EXPECT_NE(slurp(run_dir / "config.txt").find("flag.eq18=true"), std::string::npos);

  const fs::path eval_dir = dir / "eval";
  fs::create_directories(eval_dir);
  ASSERT_EQ(cli("evaluate --estimate " + run_dir.string() + "/estimate.csv --reference " +
                out + "/truth_imu.csv --out " + eval_dir.string()),
            0);
  // Re-evaluated from the 9-digit estimate file, so agreement is to ~1e-8.
  const std::string again = slurp(eval_dir / "report.txt");
  EXPECT_NEAR(value_of(again, "drift_mean_pct"), value_of(report, "drift_mean_pct"), 1e-7);
  EXPECT_NEAR(value_of(again, "heading_rmse_deg"), value_of(report, "heading_rmse_deg"), 1e-6);
  EXPECT_EQ(value_of(again, "segments"), value_of(report, "segments"));
  fs::remove_all(dir);
}

TEST(Cli, FailuresLeaveNoOutputs) {
  const fs::path dir = scratch("fail");
  const std::string out = dir.string();
  EXPECT_NE(cli("run --imu /nonexistent.csv --reference /nonexistent.csv --out " + out), 0);
  EXPECT_NE(cli("run --model odometer --imu a --reference b --out " + out), 0);
  EXPECT_NE(cli("frobnicate"), 0);
  EXPECT_NE(cli(""), 0);
  {
    std::ofstream bad(dir / "bad.cfg");
    bad << "wheel.radius = -0.3\n";
  }
  EXPECT_NE(cli("simulate --config " + (dir / "bad.cfg").string() + " --out " + out), 0);
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}

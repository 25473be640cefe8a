#include "wheelins/commands.h"

#include <cmath>

#include "wheelins/errors.h"
#include "wheelins/io.h"
#include "wheelins/simulator.h"

namespace wheelins {

Dataset simulate_dataset(const RunConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const SimConfig& sc = cfg.sim;
  sim::TruthOptions opt;
  opt.slope = sc.slope_deg * geom::kDeg;
  opt.mounting = {sc.mounting_pitch_deg * geom::kDeg,
                  sc.mounting_heading_deg * geom::kDeg};
  opt.body_mounted = sc.body_mounted;

  const auto truth = sim::generate_truth(sim::profile_by_name(sc.profile),
                                         cfg.geometry, cfg.imu_rate, opt);
  sim::Corrupted c = sim::corrupt(sim::synthesize_imu(truth, cfg.imu_rate),
                                  sc.errors, seed);

  Dataset d;
  d.imu = std::move(c.samples);
  d.injected = c.injected;
  d.truth_imu.heading = eval::HeadingConvention::Imu;
  d.truth_vehicle.heading = eval::HeadingConvention::Vehicle;
  const auto every = static_cast<std::size_t>(std::llround(cfg.imu_rate / sc.truth_rate));
  for (std::size_t i = 0; i < truth.size(); i += every) {
    // The final epoch is always kept so the reference spans the whole run.
    if (i + every >= truth.size()) i = truth.size() - 1;
    const sim::TruthEpoch& e = truth[i];
    d.truth_imu.records.push_back(eval::to_record(e.imu));
    d.truth_vehicle.records.push_back({e.time, e.center_position, e.center_velocity,
                                       0.0, e.vehicle_pitch, e.vehicle_heading});
  }
  return d;
}

CompareResult compare_runs(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                           const eval::Trajectory& reference) {
  CompareResult out;
  const meas::ModelKind kinds[3] = {meas::ModelKind::Velocity,
                                    meas::ModelKind::DisplacementIncrement,
                                    meas::ModelKind::ContactPoint};
  std::array<eval::DriftReport, 3> reports;
  for (std::size_t i = 0; i < 3; ++i) {
    RunConfig c = cfg;
    c.measurement.kind = kinds[i];
    out.runs[i] = run_pipeline(c, imu, reference);
    if (!out.runs[i].report) {
      throw TooShort(out.runs[i].errors.back().distance, cfg.segment_length);
    }
    reports[i] = *out.runs[i].report;
  }
  out.comparison = eval::compare_models(reports);
  return out;
}

namespace {

RunConfig base_config(const CommonArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) cfg = load_config(a.config_path);
  if (a.seed) cfg.seed = *a.seed;
  return cfg;
}

eval::HeadingConvention parse_heading(const std::string& s) {
  if (s == "imu") return eval::HeadingConvention::Imu;
  if (s == "vehicle") return eval::HeadingConvention::Vehicle;
  throw ConfigError("heading convention must be imu|vehicle, got '" + s + "'");
}

RunConfig run_config(const RunArgs& a) {
  RunConfig cfg = base_config(a);
  if (!a.model.empty()) cfg.measurement.kind = meas::parse_model_kind(a.model);
  for (const auto& f : a.flags) {
    if (f == "eq18") {
      cfg.measurement.half_interval_correction = true;
    } else if (f == "gate") {
      cfg.gate = true;
    } else {
      throw ConfigError("unknown flag '" + f + "' (expected eq18|gate)");
    }
  }
  if (a.lever_arm_error) {
    cfg.lever_arm_error_y = (*a.lever_arm_error)[0];
    cfg.lever_arm_error_z = (*a.lever_arm_error)[1];
  }
  cfg.validate();
  return cfg;
}

eval::Trajectory read_reference(const std::string& path, const std::string& heading) {
  return {io::read_trajectory_csv(path), parse_heading(heading)};
}

void write_run(io::OutputSet& out, const std::string& suffix, const RunRecord& r) {
  out.write("estimate" + suffix + ".csv", io::trajectory_csv(r.estimate));
  out.write("errors" + suffix + ".csv", io::error_series_csv(r.errors));
  if (r.report) {
    out.write("report" + suffix + ".txt", eval::format_report(*r.report));
    out.write("report" + suffix + ".csv",
              eval::report_csv_header() +
                  eval::report_csv_row(std::string(meas::to_string(r.config.measurement.kind)),
                                       *r.report));
  }
}

}  // namespace

void simulate_cmd(const SimulateArgs& args) {
  RunConfig cfg = base_config(args);
  if (!args.profile.empty()) cfg.sim.profile = args.profile;
  cfg.validate();
  const Dataset d = simulate_dataset(cfg, cfg.seed);

  io::OutputSet out(args.out_dir);
  out.write("imu.csv", io::imu_csv(d.imu));
  out.write("truth_imu.csv", io::trajectory_csv(d.truth_imu.records));
  out.write("truth_vehicle.csv", io::trajectory_csv(d.truth_vehicle.records));
  out.write("config.txt", format_config(cfg));
  out.keep();
}

void run_cmd(const RunArgs& args) {
  const RunConfig cfg = run_config(args);
  const auto imu = io::read_imu_csv(args.imu_path);
  const auto ref = read_reference(args.reference_path, args.reference_heading);
  const RunRecord r = run_pipeline(cfg, imu, ref);

  io::OutputSet out(args.out_dir);
  write_run(out, "", r);
  out.write("config.txt", format_config(cfg));
  out.keep();
}

void evaluate_cmd(const EvaluateArgs& args) {
  const RunConfig cfg = base_config(args);
  cfg.validate();
  const eval::Trajectory est{io::read_trajectory_csv(args.estimate_path),
                             parse_heading(args.estimate_heading)};
  const auto ref = read_reference(args.reference_path, args.reference_heading);
  const eval::ErrorSeries series = eval::align_and_diff(est, ref);
  const eval::DriftReport report = eval::make_report(series, cfg.segment_length);

  io::OutputSet out(args.out_dir);
  out.write("errors.csv", io::error_series_csv(series));
  out.write("report.txt", eval::format_report(report));
  out.write("report.csv", eval::report_csv_header() + eval::report_csv_row("estimate", report));
  out.keep();
}

void compare_cmd(const CompareArgs& args) {
  RunConfig cfg = run_config(args);
  std::vector<ImuSample> imu;
  eval::Trajectory ref;
  if (!args.imu_path.empty()) {
    if (args.reference_path.empty()) throw ConfigError("compare needs --reference with --imu");
    imu = io::read_imu_csv(args.imu_path);
    ref = read_reference(args.reference_path, args.reference_heading);
  } else {
    if (!args.profile.empty()) cfg.sim.profile = args.profile;
    cfg.validate();
    Dataset d = simulate_dataset(cfg, cfg.seed);
    imu = std::move(d.imu);
    ref = std::move(d.truth_imu);
  }
  const CompareResult res = compare_runs(cfg, imu, ref);

  io::OutputSet out(args.out_dir);
  std::string csv = eval::report_csv_header();
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string& name = res.comparison.names[i];
    write_run(out, "_" + name, res.runs[i]);
    csv += eval::report_csv_row(name, res.comparison.reports[i]);
  }
  out.write("comparison.txt",
            "seed=" + std::to_string(cfg.seed) + "\n" + eval::format_comparison(res.comparison));
  out.write("comparison.csv", csv);
  out.write("config.txt", format_config(cfg));
  out.keep();
}

}  // namespace wheelins

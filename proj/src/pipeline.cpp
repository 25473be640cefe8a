#include "wheelins/pipeline.h"

#include <chrono>
#include <cmath>
#include <span>

#include "wheelins/errors.h"
#include "wheelins/measurements.h"

namespace wheelins {

namespace {

std::size_t stride(double rate, double sub_rate) {
  return static_cast<std::size_t>(std::llround(rate / sub_rate));
}

std::vector<ImuSample> shifted(const std::vector<ImuSample>& imu, double offset) {
  std::vector<ImuSample> out = imu;
  if (offset != 0.0) {
    for (auto& s : out) s.time += offset;
  }
  return out;
}

}  // namespace

InitialState initialize(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                        const eval::Trajectory& reference) {
  if (imu.size() < 2) throw WindowTooShort(0.0);
  const double t0 = imu.front().time;
  const double half_step = 0.5 / cfg.imu_rate;
  std::size_t n = 0;
  while (n < imu.size() && imu[n].time < t0 + cfg.align_window - half_step) ++n;
  if (n >= imu.size()) throw WindowTooShort(imu.back().time - t0);

  // Per-sample accelerometer noise alone would trip a fixed threshold.
  const double sample_noise =
      filter::mps_sqrth_to_mps_sqrts(cfg.noise.vrw_mps_sqrth) * std::sqrt(cfg.imu_rate);
  const mech::Alignment a = mech::static_align(
      std::span<const ImuSample>(imu.data(), n), cfg.motion_threshold + 3.0 * sample_noise);

  InitialState init;
  init.index = n - 1;
  const double t = imu[init.index].time;
  const eval::TrajectoryRecord r = eval::interpolate(reference.records, t);
  const double yaw = reference.heading == eval::HeadingConvention::Imu
                         ? r.yaw
                         : geom::imu_heading_from_vehicle(r.yaw);
  const InitialStateConfig& ic = cfg.initial;
  init.nav.time = t;
  init.nav.position = r.position + ic.position_offset;
  init.nav.velocity = r.velocity + ic.velocity_offset;
  init.nav.attitude = geom::dcm_from_euler(
      {a.roll, a.pitch, yaw + ic.heading_offset_deg * geom::kDeg});
  if (cfg.estimate_gyro_bias) init.sensors.gyro_bias = a.gyro_bias;

  const filter::ProcessNoiseConfig q = cfg.noise.process_noise();
  filter::ErrorState sd;
  sd << Vec3::Constant(ic.position_std), Vec3::Constant(ic.velocity_std),
      Vec3(ic.tilt_std_deg, ic.tilt_std_deg, ic.heading_std_deg) * geom::kDeg,
      Vec3::Constant(q.gyro_bias.sigma), Vec3::Constant(q.accel_bias.sigma),
      Vec3::Constant(q.gyro_scale.sigma), Vec3::Constant(q.accel_scale.sigma);
  init.P = sd.cwiseAbs2().asDiagonal();
  return init;
}

namespace {

RunRecord run(const RunConfig& cfg, const std::vector<ImuSample>& raw,
              const eval::Trajectory& reference, bool aided) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate();
  const std::vector<ImuSample> imu = shifted(raw, cfg.time_offset);
  InitialState init = initialize(cfg, imu, reference);

  const meas::WheelGeometry g = cfg.estimator_geometry();
  const meas::MeasurementConfig& mc = cfg.measurement;
  const filter::ProcessNoiseConfig q = cfg.noise.process_noise();
  const std::size_t update_every = stride(cfg.imu_rate, mc.update_rate);
  const std::size_t output_every = stride(cfg.imu_rate, cfg.output_rate);

  RunRecord rec;
  rec.config = cfg;
  NavState nav = init.nav;
  SensorErrors sensors = init.sensors;
  filter::Covariance P = init.P;
  meas::DisplacementAccumulator acc =
      meas::DisplacementAccumulator::starting_at(nav.time);
  ImuSample prev = mech::compensate(imu[init.index], sensors);
  rec.estimate.push_back(eval::to_record(nav));

  for (std::size_t k = init.index + 1; k < imu.size(); ++k) {
    ImuSample curr = mech::compensate(imu[k], sensors);
    const double dt = curr.time - prev.time;
    if (!(dt > 0.0)) throw NonMonotonicTime(prev.time, curr.time);
    if (aided) P = filter::propagate_covariance(P, nav, curr, q, dt);
    nav = mech::propagate(nav, prev, curr);

    const std::size_t step = k - init.index;
    if (aided) {
      if (mc.kind == meas::ModelKind::DisplacementIncrement) {
        acc = meas::accumulate_displacement(acc, nav, curr, g);
      }
      if (step % update_every == 0) {
        meas::Innovation in;
        switch (mc.kind) {
          case meas::ModelKind::Velocity:
            in = meas::velocity_innovation(nav, curr, g, mc);
            break;
          case meas::ModelKind::DisplacementIncrement:
            in = meas::displacement_innovation(acc, mc);
            break;
          case meas::ModelKind::ContactPoint:
            in = meas::contact_innovation(nav, curr, g, mc);
            break;
        }
        const auto u = filter::update<filter::kStateDim, 3>(P, in.z, in.H, in.R);
        if (cfg.gate && u.nis > cfg.gate_threshold) {
          ++rec.rejected;
        } else {
          ++rec.updates;
          P = u.P;
          filter::ErrorState dx = u.dx;
          const filter::Corrected c = filter::feedback(nav, sensors, dx);
          nav = c.nav;
          sensors = c.sensors;
          curr = mech::compensate(imu[k], sensors);
        }
      }
      const double horizontal = P(0, 0) + P(1, 1);
      if (!(horizontal <= cfg.divergence_ceiling)) {
        throw DivergenceError(nav.time, horizontal);
      }
    }
    prev = curr;
    if (step % output_every == 0) rec.estimate.push_back(eval::to_record(nav));
  }
  rec.final_sensors = sensors;

  rec.errors = eval::align_and_diff({rec.estimate, eval::HeadingConvention::Imu},
                                    reference);
  try {
    rec.report = eval::make_report(rec.errors, cfg.segment_length);
  } catch (const TooShort&) {
    rec.report.reset();
  }
  rec.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

}  // namespace

RunRecord run_pipeline(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                       const eval::Trajectory& reference) {
  return run(cfg, imu, reference, true);
}

RunRecord run_ins(const RunConfig& cfg, const std::vector<ImuSample>& imu,
                  const eval::Trajectory& reference) {
  return run(cfg, imu, reference, false);
}

}  // namespace wheelins

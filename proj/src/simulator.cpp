#include "wheelins/simulator.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "wheelins/errors.h"
#include "wheelins/filter.h"

namespace wheelins::sim {

double TrajectoryProfile::duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

double TrajectoryProfile::distance() const {
  double d = 0.0;
  for (const auto& s : segments) d += s.distance();
  return d;
}

void TrajectoryProfile::validate() const {
  if (segments.empty()) throw ConfigError("profile '" + name + "' has no segments");
  for (const auto& s : segments) {
    if (!(s.duration > 0.0)) throw ConfigError("segment durations must be positive");
    if (!(s.start_speed >= 0.0) || !(s.end_speed >= 0.0)) {
      throw ConfigError("segment speeds must be non-negative");
    }
    if (!std::isfinite(s.heading_rate)) throw ConfigError("heading rate must be finite");
  }
  if (!(distance() > 0.0)) throw ConfigError("profile '" + name + "' does not move");
}

namespace {

constexpr double kRampTime = 2.0;

void add_ramps(TrajectoryProfile& p, double speed, double static_time,
               const std::vector<Segment>& body) {
  p.segments.push_back({static_time, 0.0, 0.0, 0.0});
  p.segments.push_back({kRampTime, 0.0, speed, 0.0});
  p.segments.insert(p.segments.end(), body.begin(), body.end());
  p.segments.push_back({kRampTime, speed, 0.0, 0.0});
  p.segments.push_back({2.0, 0.0, 0.0, 0.0});
}

}  // namespace

TrajectoryProfile straight_profile(double length, double speed,
                                   double static_time) {
  TrajectoryProfile p;
  p.name = "straight";
  const double cruise = length - speed * kRampTime;
  if (!(cruise > 0.0)) throw ConfigError("straight profile too short for its ramps");
  add_ramps(p, speed, static_time, {{cruise / speed, speed, speed, 0.0}});
  return p;
}

TrajectoryProfile loop_profile(std::string name, double length, double width,
                               double corner_radius, double speed, int laps,
                               double static_time) {
  const double turn_time = 0.5 * geom::kPi * corner_radius / speed;
  const double rate = speed / corner_radius;
  std::vector<Segment> body;
  for (int lap = 0; lap < laps; ++lap) {
    for (const double side : {length, width, length, width}) {
      body.push_back({(side - 2.0 * corner_radius) / speed, speed, speed, 0.0});
      body.push_back({turn_time, speed, speed, rate});
    }
  }
  // The start ramp eats into the first side; the stop ramp runs onto it
  // again, so each lap is the exact rounded-rectangle perimeter.
  body.front().duration -= 0.5 * kRampTime;
  if (!(body.front().duration > 0.0)) throw ConfigError("loop sides too short for the ramps");
  TrajectoryProfile p;
  p.name = std::move(name);
  add_ramps(p, speed, static_time, body);
  return p;
}

TrajectoryProfile profile_by_name(std::string_view name) {
  if (name == "test1") return loop_profile("test1", 72.0, 52.0, 3.0, 1.39, 5);
  if (name == "test5") return loop_profile("test5", 2000.0, 1000.0, 20.0, 4.7, 2);
  if (name == "straight") return straight_profile(1000.0, 1.39);
  throw ConfigError("unknown profile '" + std::string(name) +
                    "' (expected test1|test5|straight)");
}

SensorErrorSpec SensorErrorSpec::icm20602() {
  SensorErrorSpec s;
  s.gyro_bias_degph = 200.0;
  s.arw_deg_sqrth = 0.24;
  s.accel_bias_mps2 = 0.01;
  s.vrw_mps_sqrth = 3.0;
  return s;
}

void SensorErrorSpec::validate() const {
  const double v[] = {gyro_bias_degph, arw_deg_sqrth,  accel_bias_mps2,
                      vrw_mps_sqrth,   gyro_scale_ppm, accel_scale_ppm};
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ConfigError("sensor error figures must be finite and non-negative");
    }
  }
  if (!(bias_correlation_time > 0.0)) {
    throw ConfigError("bias correlation time must be positive");
  }
}

namespace {

using Complex = std::complex<double>;

// Wheel-center kinematics at time tau into a segment.
struct Kinematics {
  Vec3 position, velocity, acceleration;
  double heading, heading_rate;
  double distance, speed, accel;
};

struct SegmentStart {
  double time;
  Vec3 position;
  double heading;
  double distance;
};

Kinematics evaluate(const Segment& seg, const SegmentStart& s0, double tau,
                    double slope) {
  const double a = (seg.end_speed - seg.start_speed) / seg.duration;
  const double v0 = seg.start_speed, w = seg.heading_rate;
  const double ct = std::cos(slope), st = std::sin(slope);

  Kinematics k;
  k.speed = v0 + a * tau;
  k.accel = a;
  k.distance = s0.distance + v0 * tau + 0.5 * a * tau * tau;
  k.heading = s0.heading + w * tau;
  k.heading_rate = w;

  // Integral of (v0 + a t) exp(i (psi0 + w t)) over [0, tau].
  Complex integral;
  if (std::abs(w) < 1e-12) {
    integral = v0 * tau + 0.5 * a * tau * tau;
  } else {
    const Complex iw(0.0, w);
    const Complex e = std::exp(iw * tau);
    integral = v0 * (e - 1.0) / iw + a * (tau * e / iw - (e - 1.0) / (iw * iw));
  }
  integral *= std::exp(Complex(0.0, s0.heading));

  const double ch = std::cos(k.heading), sh = std::sin(k.heading);
  const Vec3 forward(ct * ch, ct * sh, -st);
  k.position = s0.position +
               Vec3(ct * integral.real(), ct * integral.imag(),
                    -st * (k.distance - s0.distance));
  k.velocity = k.speed * forward;
  k.acceleration = a * forward + k.speed * w * ct * Vec3(-sh, ch, 0.0);
  return k;
}

Mat3 rot_x(double a) { return geom::dcm_from_euler({a, 0.0, 0.0}); }
Mat3 rot_y(double a) { return geom::dcm_from_euler({0.0, a, 0.0}); }
Mat3 rot_z(double a) { return geom::dcm_from_euler({0.0, 0.0, a}); }

}  // namespace

std::vector<TruthEpoch> generate_truth(const TrajectoryProfile& profile,
                                       const meas::WheelGeometry& g,
                                       double rate,
                                       const TruthOptions& options) {
  profile.validate();
  g.validate();
  geom::validate(options.mounting);
  if (!(rate >= 50.0)) throw ConfigError("truth rate must be at least 50 Hz");
  if (g.forward_sign != -1) {
    throw ConfigError(
        "forward_sign +1 contradicts the frame layout: rolling forward spins "
        "the wheel about the negative axle axis");
  }

  std::vector<SegmentStart> starts;
  SegmentStart s0{0.0, profile.initial_position, profile.initial_heading, 0.0};
  for (const auto& seg : profile.segments) {
    starts.push_back(s0);
    const Kinematics end = evaluate(seg, s0, seg.duration, options.slope);
    s0 = {s0.time + seg.duration, end.position, end.heading, end.distance};
  }

  const Mat3 grade = rot_y(options.slope);
  const Mat3 axle = rot_z(geom::kPi / 2.0);
  const Mat3 mount = geom::dcm_body_to_wheel(options.mounting);  // C_b^w
  const Vec3 gravity(0.0, 0.0, options.gravity);
  const Vec3& l = g.lever_arm;

  const double total = profile.duration();
  const auto count = static_cast<std::size_t>(std::floor(total * rate + 1e-6)) + 1;
  std::vector<TruthEpoch> out;
  out.reserve(count);
  std::size_t seg_idx = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / rate;
    while (seg_idx + 1 < profile.segments.size() &&
           t >= starts[seg_idx + 1].time) {
      ++seg_idx;
    }
    const Segment& seg = profile.segments[seg_idx];
    const double tau = std::min(t - starts[seg_idx].time, seg.duration);
    const Kinematics k = evaluate(seg, starts[seg_idx], tau, options.slope);

    TruthEpoch e;
    e.time = t;
    e.center_position = k.position;
    e.center_velocity = k.velocity;
    e.vehicle_heading = geom::wrap_angle(k.heading);
    e.vehicle_pitch = options.slope;
    e.speed = k.speed;
    e.wheel_angle = g.forward_sign * k.distance / g.radius;
    e.wheel_rate = g.forward_sign * k.speed / g.radius;

    double roll = e.wheel_angle, roll_rate = e.wheel_rate;
    double roll_accel = g.forward_sign * k.accel / g.radius;
    if (options.body_mounted) roll = roll_rate = roll_accel = 0.0;

    const Mat3 rx = rot_x(roll);
    const Mat3 c_wn = rot_z(k.heading) * grade * axle * rx;
    const Dcm c = c_wn * mount;

    // Vehicle turn rate expressed in the spinning wheel frame.
    const Vec3 turn = (axle.transpose() * grade.transpose()) *
                      Vec3(0.0, 0.0, k.heading_rate);
    const Vec3 turn_w = rx.transpose() * turn;
    const Vec3 w_w = turn_w + roll_rate * Vec3::UnitX();
    const Vec3 dw_w = -roll_rate * Vec3::UnitX().cross(turn_w) +
                      roll_accel * Vec3::UnitX();
    const Vec3 w_b = mount.transpose() * w_w;
    const Vec3 dw_b = mount.transpose() * dw_w;

    e.imu.time = t;
    e.imu.attitude = c;
    e.imu.position = k.position - c * l;
    e.imu.velocity = k.velocity - c * w_b.cross(l);
    const Vec3 acc = k.acceleration - c * (w_b.cross(w_b.cross(l)) + dw_b.cross(l));
    e.gyro = w_b;
    e.accel = c.transpose() * (acc - gravity);
    out.push_back(e);
  }
  return out;
}

std::vector<ImuSample> synthesize_imu(const std::vector<TruthEpoch>& truth,
                                      double rate, double gravity) {
  if (truth.size() < 2) throw std::invalid_argument("synthesize_imu: need two epochs");
  const double truth_rate = static_cast<double>(truth.size() - 1) /
                            (truth.back().time - truth.front().time);
  const double ratio = truth_rate / rate;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-6) {
    throw std::invalid_argument("synthesize_imu: rate must divide the truth rate");
  }

  const Vec3 g_n(0.0, 0.0, gravity);
  std::vector<ImuSample> out;
  out.reserve(truth.size() / stride + 1);
  out.push_back({truth.front().time, truth.front().gyro, truth.front().accel});
  for (std::size_t i = stride; i < truth.size(); i += stride) {
    const NavState& a = truth[i - stride].imu;
    const NavState& b = truth[i].imu;
    const double dt = b.time - a.time;
    ImuSample s;
    s.time = b.time;
    s.gyro = geom::rotation_log(a.attitude.transpose() * b.attitude) / dt;
    // Inverse of the midpoint velocity update.
    const Dcm c_mid = a.attitude * geom::rotation_exp(0.5 * dt * s.gyro);
    s.accel = c_mid.transpose() * ((b.velocity - a.velocity) / dt - g_n);
    out.push_back(s);
  }
  return out;
}

Corrupted corrupt(const std::vector<ImuSample>& samples,
                  const SensorErrorSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw3 = [&]() {
    const double x = normal(rng), y = normal(rng), z = normal(rng);
    return Vec3(x, y, z);
  };

  const double gb = filter::degph_to_radps(spec.gyro_bias_degph);
  const double ab = spec.accel_bias_mps2;
  const double arw = filter::deg_sqrth_to_rad_sqrts(spec.arw_deg_sqrth);
  const double vrw = filter::mps_sqrth_to_mps_sqrts(spec.vrw_mps_sqrth);

  Corrupted out;
  out.injected.gyro_bias = gb * draw3();
  out.injected.accel_bias = ab * draw3();
  out.injected.gyro_scale = spec.gyro_scale_ppm * 1e-6 * draw3();
  out.injected.accel_scale = spec.accel_scale_ppm * 1e-6 * draw3();

  Vec3 bg = out.injected.gyro_bias, ba = out.injected.accel_bias;
  const Vec3 sg = Vec3::Ones() + out.injected.gyro_scale;
  const Vec3 sa = Vec3::Ones() + out.injected.accel_scale;

  out.samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double dt = 1.0;
    if (i > 0) {
      dt = samples[i].time - samples[i - 1].time;
    } else if (samples.size() > 1) {
      dt = samples[1].time - samples[0].time;
    }
    const double root = std::sqrt(dt);
    ImuSample s = samples[i];
    s.gyro = sg.cwiseProduct(s.gyro) + bg + (arw / root) * draw3();
    s.accel = sa.cwiseProduct(s.accel) + ba + (vrw / root) * draw3();
    out.samples.push_back(s);

    if (spec.bias_model == BiasModel::GaussMarkov) {
      const double decay = std::exp(-dt / spec.bias_correlation_time);
      const double drive = std::sqrt(1.0 - decay * decay);
      bg = decay * bg + gb * drive * draw3();
      ba = decay * ba + ab * drive * draw3();
    }
  }
  return out;
}

meas::WheelGeometry inject_lever_arm_error(const meas::WheelGeometry& g,
                                           double dy, double dz) {
  meas::WheelGeometry out = g;
  out.lever_arm += Vec3(0.0, dy, dz);
  return out;
}

}  // namespace wheelins::sim

#include "wheelins/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wheelins/errors.h"

namespace wheelins {

filter::ProcessNoiseConfig NoiseFigures::process_noise() const {
  return filter::ProcessNoiseConfig::from_datasheet(
      gyro_bias_degph, arw_deg_sqrth, accel_bias_mps2, vrw_mps_sqrth,
      gyro_scale_ppm, accel_scale_ppm, bias_correlation_time,
      scale_correlation_time);
}

namespace {

bool divides(double rate, double sub_rate) {
  const double r = rate / sub_rate;
  return r >= 1.0 - 1e-9 && std::abs(r - std::round(r)) < 1e-9;
}

}  // namespace

void RunConfig::validate() const {
  if (!(imu_rate > 0.0) || !(output_rate > 0.0)) {
    throw ConfigError("rates must be positive");
  }
  measurement.validate();
  if (!divides(imu_rate, measurement.update_rate)) {
    throw ConfigError("update_rate must divide imu_rate");
  }
  if (!divides(imu_rate, output_rate)) {
    throw ConfigError("output_rate must divide imu_rate");
  }
  geometry.validate();
  estimator_geometry().validate();
  noise.process_noise().validate();
  const InitialStateConfig& i = initial;
  if (!(i.position_std > 0.0) || !(i.velocity_std > 0.0) ||
      !(i.tilt_std_deg > 0.0) || !(i.heading_std_deg > 0.0)) {
    throw ConfigError("initial standard deviations must be positive");
  }
  if (!(align_window >= mech::kMinAlignmentWindow)) {
    throw ConfigError("align.window must be at least 1 s");
  }
  if (!(motion_threshold > 0.0) || !(segment_length > 0.0) ||
      !(divergence_ceiling > 0.0) || !(gate_threshold > 0.0)) {
    throw ConfigError("thresholds must be positive");
  }
  if (!std::isfinite(time_offset)) throw ConfigError("time_offset must be finite");
  sim.errors.validate();
  sim::profile_by_name(sim.profile);
  geom::validate({sim.mounting_pitch_deg * geom::kDeg,
                  sim.mounting_heading_deg * geom::kDeg});
  if (!(std::abs(sim.slope_deg) < 30.0)) {
    throw ConfigError("sim.slope_deg must lie within +-30 deg");
  }
  if (!(sim.truth_rate > 0.0) || !divides(imu_rate, sim.truth_rate)) {
    throw ConfigError("sim.truth_rate must divide imu_rate");
  }
}

meas::WheelGeometry RunConfig::estimator_geometry() const {
  return sim::inject_lever_arm_error(geometry, lever_arm_error_y,
                                     lever_arm_error_z);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string exact(const Vec3& v) {
  return exact(v.x()) + "," + exact(v.y()) + "," + exact(v.z());
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s, std::size_t n) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_double(trim(s.substr(start, comma - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) +
                                " comma-separated numbers, got '" + s + "'");
  }
  return out;
}

Vec3 parse_vec3(const std::string& s) {
  const auto v = parse_list(s, 3);
  return {v[0], v[1], v[2]};
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true|false, got '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

std::string bias_model_name(sim::BiasModel m) {
  return m == sim::BiasModel::Constant ? "constant" : "gauss-markov";
}

sim::BiasModel parse_bias_model(const std::string& s) {
  if (s == "constant") return sim::BiasModel::Constant;
  if (s == "gauss-markov") return sim::BiasModel::GaussMarkov;
  throw std::invalid_argument("expected constant|gauss-markov, got '" + s + "'");
}

sim::SensorErrorSpec preset_errors(const std::string& s) {
  if (s == "icm20602") return sim::SensorErrorSpec::icm20602();
  if (s == "ideal") return sim::SensorErrorSpec::ideal();
  throw std::invalid_argument("expected icm20602|ideal, got '" + s + "'");
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Ref>
Field number(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& v) { ref(c) = parse_double(v); },
          [ref](const RunConfig& c) { return exact(ref(c)); }};
}

template <class Ref>
Field triad(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& v) { ref(c) = parse_vec3(v); },
          [ref](const RunConfig& c) { return exact(ref(c)); }};
}

template <class Ref>
Field flag(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& v) { ref(c) = parse_bool(v); },
          [ref](const RunConfig& c) { return std::string(ref(c) ? "true" : "false"); }};
}

#define REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"model",
       [](RunConfig& c, const std::string& v) {
         c.measurement.kind = meas::parse_model_kind(v);
       },
       [](const RunConfig& c) { return std::string(meas::to_string(c.measurement.kind)); }},
      number("imu_rate", REF(imu_rate)),
      number("update_rate", REF(measurement.update_rate)),
      number("output_rate", REF(output_rate)),
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      number("time_offset", REF(time_offset)),
      number("wheel.radius", REF(geometry.radius)),
      triad("wheel.lever_arm", REF(geometry.lever_arm)),
      {"wheel.forward_sign",
       [](RunConfig& c, const std::string& v) {
         if (v == "1" || v == "+1") {
           c.geometry.forward_sign = 1;
         } else if (v == "-1") {
           c.geometry.forward_sign = -1;
         } else {
           throw std::invalid_argument("expected +1 or -1, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::to_string(c.geometry.forward_sign); }},
      {"estimator.lever_arm_error",
       [](RunConfig& c, const std::string& v) {
         const auto d = parse_list(v, 2);
         c.lever_arm_error_y = d[0];
         c.lever_arm_error_z = d[1];
       },
       [](const RunConfig& c) {
         return exact(c.lever_arm_error_y) + "," + exact(c.lever_arm_error_z);
       }},
      number("noise.gyro_bias_degph", REF(noise.gyro_bias_degph)),
      number("noise.arw_deg_sqrth", REF(noise.arw_deg_sqrth)),
      number("noise.accel_bias_mps2", REF(noise.accel_bias_mps2)),
      number("noise.vrw_mps_sqrth", REF(noise.vrw_mps_sqrth)),
      number("noise.gyro_scale_ppm", REF(noise.gyro_scale_ppm)),
      number("noise.accel_scale_ppm", REF(noise.accel_scale_ppm)),
      number("noise.bias_correlation_time", REF(noise.bias_correlation_time)),
      number("noise.scale_correlation_time", REF(noise.scale_correlation_time)),
      triad("meas.velocity_std", REF(measurement.velocity_std)),
      triad("meas.displacement_std", REF(measurement.displacement_std)),
      triad("meas.contact_std", REF(measurement.contact_std)),
      number("init.position_std", REF(initial.position_std)),
      number("init.velocity_std", REF(initial.velocity_std)),
      number("init.tilt_std_deg", REF(initial.tilt_std_deg)),
      number("init.heading_std_deg", REF(initial.heading_std_deg)),
      triad("init.position_offset", REF(initial.position_offset)),
      triad("init.velocity_offset", REF(initial.velocity_offset)),
      number("init.heading_offset_deg", REF(initial.heading_offset_deg)),
      number("align.window", REF(align_window)),
      number("align.motion_threshold", REF(motion_threshold)),
      flag("align.estimate_gyro_bias", REF(estimate_gyro_bias)),
      number("eval.segment_length", REF(segment_length)),
      number("divergence.ceiling", REF(divergence_ceiling)),
      flag("flag.eq18", REF(measurement.half_interval_correction)),
      flag("flag.gate", REF(gate)),
      number("gate.threshold", REF(gate_threshold)),
      {"sim.profile", [](RunConfig& c, const std::string& v) { c.sim.profile = v; },
       [](const RunConfig& c) { return c.sim.profile; }},
      {"sim.preset",
       [](RunConfig& c, const std::string& v) {
         c.sim.errors = preset_errors(v);
         c.sim.preset = v;
       },
       [](const RunConfig& c) { return c.sim.preset; }},
      number("sim.gyro_bias_degph", REF(sim.errors.gyro_bias_degph)),
      number("sim.arw_deg_sqrth", REF(sim.errors.arw_deg_sqrth)),
      number("sim.accel_bias_mps2", REF(sim.errors.accel_bias_mps2)),
      number("sim.vrw_mps_sqrth", REF(sim.errors.vrw_mps_sqrth)),
      number("sim.gyro_scale_ppm", REF(sim.errors.gyro_scale_ppm)),
      number("sim.accel_scale_ppm", REF(sim.errors.accel_scale_ppm)),
      {"sim.bias_model",
       [](RunConfig& c, const std::string& v) {
         c.sim.errors.bias_model = parse_bias_model(v);
       },
       [](const RunConfig& c) { return bias_model_name(c.sim.errors.bias_model); }},
      number("sim.bias_correlation_time", REF(sim.errors.bias_correlation_time)),
      number("sim.slope_deg", REF(sim.slope_deg)),
      number("sim.mounting_pitch_deg", REF(sim.mounting_pitch_deg)),
      number("sim.mounting_heading_deg", REF(sim.mounting_heading_deg)),
      flag("sim.body_mounted", REF(sim.body_mounted)),
      number("sim.truth_rate", REF(sim.truth_rate)),
  };
  return table;
}

#undef REF

}  // namespace

void set_config_value(RunConfig& cfg, const std::string& key,
                      const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text, const std::string& source,
                       RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = line.substr(0, line.find('#'));
    if (trim(body).empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      const std::size_t col = body.find_first_not_of(" \t") + 1;
      throw ParseError(source, line_no, col, "expected key=value");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    try {
      set_config_value(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      const std::size_t col = body.find_first_not_of(" \t", eq + 1);
      throw ParseError(source, line_no,
                       col == std::string::npos ? eq + 2 : col + 1,
                       key + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, std::move(base));
}

std::string format_config(const RunConfig& cfg) {
  // Table order puts sim.preset ahead of the figures it would reset.
  std::string out;
  for (const auto& f : fields()) {
    out += f.key + "=" + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace wheelins

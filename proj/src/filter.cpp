#include "wheelins/filter.h"

#include <cmath>
#include <stdexcept>

namespace wheelins::filter {

double degph_to_radps(double v) { return v * geom::kDeg / 3600.0; }
double deg_sqrth_to_rad_sqrts(double v) { return v * geom::kDeg / 60.0; }
double mps_sqrth_to_mps_sqrts(double v) { return v / 60.0; }

ProcessNoiseConfig ProcessNoiseConfig::from_datasheet(
    double gyro_bias_degph, double arw_deg_sqrth, double accel_bias_mps2,
    double vrw_mps_sqrth, double gyro_scale_ppm, double accel_scale_ppm,
    double bias_corr_time, double scale_corr_time) {
  ProcessNoiseConfig c;
  c.angle_random_walk = deg_sqrth_to_rad_sqrts(arw_deg_sqrth);
  c.velocity_random_walk = mps_sqrth_to_mps_sqrts(vrw_mps_sqrth);
  c.gyro_bias = {bias_corr_time, degph_to_radps(gyro_bias_degph)};
  c.accel_bias = {bias_corr_time, accel_bias_mps2};
  c.gyro_scale = {scale_corr_time, gyro_scale_ppm * 1e-6};
  c.accel_scale = {scale_corr_time, accel_scale_ppm * 1e-6};
  return c;
}

ProcessNoiseConfig ProcessNoiseConfig::icm20602() {
  return from_datasheet(200.0, 0.24, 0.01, 3.0, 1000.0, 1000.0);
}

void ProcessNoiseConfig::validate() const {
  const auto bad_gm = [](const GaussMarkovParams& p) {
    return !(p.correlation_time > 0.0) || !(p.sigma >= 0.0);
  };
  if (!(angle_random_walk >= 0.0) || !(velocity_random_walk >= 0.0) ||
      bad_gm(gyro_bias) || bad_gm(accel_bias) || bad_gm(gyro_scale) ||
      bad_gm(accel_scale)) {
    throw ConfigError("process noise parameters must be non-negative with T > 0");
  }
}

ContinuousModel continuous_dynamics(const NavState& nav, const ImuSample& imu,
                                    const ProcessNoiseConfig& cfg) {
  const Dcm& c = nav.attitude;
  ContinuousModel m;
  m.F.setZero();
  m.F.block<3, 3>(kPos, kVel).setIdentity();

  m.F.block<3, 3>(kVel, kAtt) = geom::skew(c * imu.accel);
  m.F.block<3, 3>(kVel, kAccelBias) = c;
  m.F.block<3, 3>(kVel, kAccelScale) = c * imu.accel.asDiagonal();

  m.F.block<3, 3>(kAtt, kGyroBias) = -c;
  m.F.block<3, 3>(kAtt, kGyroScale) = -c * imu.gyro.asDiagonal();

  const auto gm_rows = [&m](int idx, const GaussMarkovParams& p) {
    m.F.block<3, 3>(idx, idx) = -Mat3::Identity() / p.correlation_time;
  };
  gm_rows(kGyroBias, cfg.gyro_bias);
  gm_rows(kAccelBias, cfg.accel_bias);
  gm_rows(kGyroScale, cfg.gyro_scale);
  gm_rows(kAccelScale, cfg.accel_scale);

  // Noise inputs: accel white noise, gyro white noise, four GM drivers.
  Eigen::Matrix<double, kStateDim, 18> G = Eigen::Matrix<double, kStateDim, 18>::Zero();
  G.block<3, 3>(kVel, 0) = c;
  G.block<3, 3>(kAtt, 3) = -c;
  G.block<3, 3>(kGyroBias, 6).setIdentity();
  G.block<3, 3>(kAccelBias, 9).setIdentity();
  G.block<3, 3>(kGyroScale, 12).setIdentity();
  G.block<3, 3>(kAccelScale, 15).setIdentity();

  Eigen::Matrix<double, 18, 1> q;
  q << Vec3::Constant(cfg.velocity_random_walk * cfg.velocity_random_walk),
      Vec3::Constant(cfg.angle_random_walk * cfg.angle_random_walk),
      Vec3::Constant(cfg.gyro_bias.driving_psd()),
      Vec3::Constant(cfg.accel_bias.driving_psd()),
      Vec3::Constant(cfg.gyro_scale.driving_psd()),
      Vec3::Constant(cfg.accel_scale.driving_psd());
  m.GQGt = G * q.asDiagonal() * G.transpose();
  return m;
}

DiscreteModel discretize(const Matrix21& F, const Matrix21& GQGt, double dt) {
  if (!(dt > 0.0) || dt > 0.1) {
    throw std::invalid_argument("discretize: dt must lie in (0, 0.1] s");
  }
  DiscreteModel d;
  d.Phi = Matrix21::Identity() + F * dt;
  d.Qd = symmetrized<kStateDim>(
      0.5 * (d.Phi * GQGt * d.Phi.transpose() + GQGt) * dt);
  return d;
}

Corrected feedback(const NavState& nav, const SensorErrors& sensors,
                   ErrorState& dx) {
  Corrected out{nav, sensors};
  out.nav.position -= dx.segment<3>(kPos);
  out.nav.velocity -= dx.segment<3>(kVel);
  out.nav.attitude = geom::orthonormalize(
      geom::rotation_exp(dx.segment<3>(kAtt)) * nav.attitude);
  out.sensors.gyro_bias += dx.segment<3>(kGyroBias);
  out.sensors.accel_bias += dx.segment<3>(kAccelBias);
  out.sensors.gyro_scale += dx.segment<3>(kGyroScale);
  out.sensors.accel_scale += dx.segment<3>(kAccelScale);
  dx.setZero();
  return out;
}

namespace {

// The nonzero blocks of F, applied without forming the 21x21 matrix.
struct SparseDynamics {
  Mat3 vel_att;
  Mat3 c;
  Mat3 c_diag_f;
  Mat3 c_diag_w;
  double inv_t[4];

  SparseDynamics(const NavState& nav, const ImuSample& imu,
                 const ProcessNoiseConfig& cfg)
      : vel_att(geom::skew(nav.attitude * imu.accel)),
        c(nav.attitude),
        c_diag_f(nav.attitude * imu.accel.asDiagonal()),
        c_diag_w(nav.attitude * imu.gyro.asDiagonal()),
        inv_t{1.0 / cfg.gyro_bias.correlation_time,
              1.0 / cfg.accel_bias.correlation_time,
              1.0 / cfg.gyro_scale.correlation_time,
              1.0 / cfg.accel_scale.correlation_time} {}

  // Returns F * m.
  Matrix21 apply(const Matrix21& m) const {
    Matrix21 out;
    out.middleRows<3>(kPos) = m.middleRows<3>(kVel);
    out.middleRows<3>(kVel) = vel_att * m.middleRows<3>(kAtt) +
                              c * m.middleRows<3>(kAccelBias) +
                              c_diag_f * m.middleRows<3>(kAccelScale);
    out.middleRows<3>(kAtt) = -(c * m.middleRows<3>(kGyroBias) +
                                c_diag_w * m.middleRows<3>(kGyroScale));
    out.middleRows<3>(kGyroBias) = -inv_t[0] * m.middleRows<3>(kGyroBias);
    out.middleRows<3>(kAccelBias) = -inv_t[1] * m.middleRows<3>(kAccelBias);
    out.middleRows<3>(kGyroScale) = -inv_t[2] * m.middleRows<3>(kGyroScale);
    out.middleRows<3>(kAccelScale) = -inv_t[3] * m.middleRows<3>(kAccelScale);
    return out;
  }

  // Returns Phi * m * Phi^T with Phi = I + F dt.
  Matrix21 congruence(const Matrix21& m, double dt) const {
    const Matrix21 n = m + dt * apply(m);
    return n + dt * apply(n.transpose()).transpose();
  }
};

}  // namespace

Covariance propagate_covariance(const Covariance& P, const NavState& nav,
                                const ImuSample& imu,
                                const ProcessNoiseConfig& cfg, double dt) {
  if (!(dt > 0.0) || dt > 0.1) {
    throw std::invalid_argument("propagate_covariance: dt must lie in (0, 0.1] s");
  }
  const SparseDynamics f(nav, imu, cfg);

  // G Q G^T is diagonal: the white-noise blocks are isotropic, so the
  // attitude rotation drops out.
  Matrix21 s = Matrix21::Zero();
  const double vrw2 = cfg.velocity_random_walk * cfg.velocity_random_walk;
  const double arw2 = cfg.angle_random_walk * cfg.angle_random_walk;
  s.diagonal().segment<3>(kVel).setConstant(vrw2);
  s.diagonal().segment<3>(kAtt).setConstant(arw2);
  s.diagonal().segment<3>(kGyroBias).setConstant(cfg.gyro_bias.driving_psd());
  s.diagonal().segment<3>(kAccelBias).setConstant(cfg.accel_bias.driving_psd());
  s.diagonal().segment<3>(kGyroScale).setConstant(cfg.gyro_scale.driving_psd());
  s.diagonal().segment<3>(kAccelScale).setConstant(cfg.accel_scale.driving_psd());

  const Matrix21 qd = 0.5 * (f.congruence(s, dt) + s) * dt;
  return symmetrized<kStateDim>(f.congruence(P, dt) + qd);
}

}  // namespace wheelins::filter

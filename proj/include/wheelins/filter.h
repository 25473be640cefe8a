#pragma once

#include <Eigen/Dense>

#include "wheelins/errors.h"
#include "wheelins/mechanization.h"

namespace wheelins::filter {

inline constexpr int kStateDim = 21;

// Error-state layout: position, velocity, attitude (phi angle), gyro bias,
// accel bias, gyro scale, accel scale. Three components each.
enum StateIndex : int {
  kPos = 0,
  kVel = 3,
  kAtt = 6,
  kGyroBias = 9,
  kAccelBias = 12,
  kGyroScale = 15,
  kAccelScale = 18,
};

using ErrorState = Eigen::Matrix<double, kStateDim, 1>;
using Matrix21 = Eigen::Matrix<double, kStateDim, kStateDim>;
using Covariance = Matrix21;

struct GaussMarkovParams {
  double correlation_time = 3600.0;  // s
  double sigma = 0.0;                // steady-state 1-sigma

  // Driving-noise PSD that keeps the steady-state variance at sigma^2.
  double driving_psd() const { return 2.0 * sigma * sigma / correlation_time; }
};

// Continuous-time process noise in SI units.
struct ProcessNoiseConfig {
  double angle_random_walk = 0.0;     // rad/sqrt(s)
  double velocity_random_walk = 0.0;  // m/s/sqrt(s)
  GaussMarkovParams gyro_bias;        // rad/s
  GaussMarkovParams accel_bias;       // m/s^2
  GaussMarkovParams gyro_scale;       // dimensionless
  GaussMarkovParams accel_scale;      // dimensionless

  // Builds the config from datasheet units: deg/h, deg/sqrt(h), m/s^2,
  // m/s/sqrt(h), ppm, ppm.
  static ProcessNoiseConfig from_datasheet(double gyro_bias_degph,
                                           double arw_deg_sqrth,
                                           double accel_bias_mps2,
                                           double vrw_mps_sqrth,
                                           double gyro_scale_ppm,
                                           double accel_scale_ppm,
                                           double bias_corr_time = 3600.0,
                                           double scale_corr_time = 3600.0);

  // ICM20602 figures used throughout the experiments, 1000 ppm scale bound.
  static ProcessNoiseConfig icm20602();

  void validate() const;
};

// Unit conversions shared with the simulator.
double degph_to_radps(double v);
double deg_sqrth_to_rad_sqrts(double v);
double mps_sqrth_to_mps_sqrts(double v);

struct ContinuousModel {
  Matrix21 F;
  Matrix21 GQGt;  // G * Q * G^T
};

/// Linearized error dynamics around nav for a compensated sample.
ContinuousModel continuous_dynamics(const NavState& nav, const ImuSample& imu,
                                    const ProcessNoiseConfig& cfg);

struct DiscreteModel {
  Matrix21 Phi;
  Matrix21 Qd;
};

/// First-order transition and trapezoidal noise mapping. Requires
/// 0 < dt <= 0.1 s (std::invalid_argument otherwise).
DiscreteModel discretize(const Matrix21& F, const Matrix21& GQGt, double dt);

template <int N>
Eigen::Matrix<double, N, N> symmetrized(const Eigen::Matrix<double, N, N>& m) {
  return 0.5 * (m + m.transpose());
}

template <int N>
Eigen::Matrix<double, N, N> predict(const Eigen::Matrix<double, N, N>& P,
                                    const Eigen::Matrix<double, N, N>& Phi,
                                    const Eigen::Matrix<double, N, N>& Qd) {
  return symmetrized<N>(Phi * P * Phi.transpose() + Qd);
}

template <int N>
struct UpdateResult {
  Eigen::Matrix<double, N, 1> dx;
  Eigen::Matrix<double, N, N> P;
  double nis = 0.0;  // z^T S^-1 z
};

/// Kalman measurement update about a zero prior with the Joseph form.
template <int N, int M>
UpdateResult<N> update(const Eigen::Matrix<double, N, N>& P,
                       const Eigen::Matrix<double, M, 1>& z,
                       const Eigen::Matrix<double, M, N>& H,
                       const Eigen::Matrix<double, M, M>& R) {
  const Eigen::Matrix<double, M, M> S =
      symmetrized<M>(H * P * H.transpose() + R);
  Eigen::LDLT<Eigen::Matrix<double, M, M>> ldlt(S);
  const double scale = S.diagonal().cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(scale > 0.0) ||
      ldlt.vectorD().minCoeff() <= 1e-12 * scale) {
    throw SingularInnovationCovariance();
  }
  const Eigen::Matrix<double, N, M> PHt = P * H.transpose();
  const Eigen::Matrix<double, N, M> K = ldlt.solve(PHt.transpose()).transpose();
  const Eigen::Matrix<double, N, N> IKH =
      Eigen::Matrix<double, N, N>::Identity() - K * H;

  UpdateResult<N> out;
  out.dx = K * z;
  out.P = symmetrized<N>(IKH * P * IKH.transpose() + K * R * K.transpose());
  out.nis = z.dot(ldlt.solve(z));
  return out;
}

struct Corrected {
  NavState nav;
  SensorErrors sensors;
};

/// Closed-loop correction. The attitude estimate is modeled as
/// (I - phi x) C_true, so the correction left-multiplies by exp(phi x).
/// Clears dx.
Corrected feedback(const NavState& nav, const SensorErrors& sensors,
                   ErrorState& dx);

/// Equivalent to predict(P, discretize(continuous_dynamics(...))) but
/// exploits the block sparsity of F and G; used at IMU rate.
Covariance propagate_covariance(const Covariance& P, const NavState& nav,
                                const ImuSample& imu,
                                const ProcessNoiseConfig& cfg, double dt);

}  // namespace wheelins::filter

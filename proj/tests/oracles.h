#pragma once

// Reference implementations written independently of the library, used as
// test oracles.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

#include "wheelins/filter.h"
#include "wheelins/mechanization.h"

namespace oracle {

using wheelins::Mat3;
using wheelins::Vec3;

inline Mat3 cross_matrix(const Vec3& v) {
  Mat3 m = Mat3::Zero();
  m(0, 1) = -v.z();
  m(0, 2) = v.y();
  m(1, 0) = v.z();
  m(1, 2) = -v.x();
  m(2, 0) = -v.y();
  m(2, 1) = v.x();
  return m;
}

// Rodrigues formula, written out.
inline Mat3 rodrigues(const Vec3& v) {
  const double t = v.norm();
  const Mat3 k = cross_matrix(v);
  if (t < 1e-9) return Mat3::Identity() + k + 0.5 * k * k;
  return Mat3::Identity() + std::sin(t) / t * k + (1.0 - std::cos(t)) / (t * t) * k * k;
}

// Right Jacobian of SO(3).
inline Mat3 right_jacobian(const Vec3& v) {
  const double t = v.norm();
  const Mat3 k = cross_matrix(v);
  if (t < 1e-6) return Mat3::Identity() - 0.5 * k + k * k / 6.0;
  return Mat3::Identity() - (1.0 - std::cos(t)) / (t * t) * k +
         (t - std::sin(t)) / (t * t * t) * k * k;
}

// Heading-pitch-roll composition from elementary rotations.
inline Mat3 euler_dcm(double roll, double pitch, double heading) {
  return (Eigen::AngleAxisd(heading, Vec3::UnitZ()) *
          Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

struct Random {
  std::mt19937_64 rng;
  explicit Random(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }
  Vec3 vec(double scale) {
    return Vec3(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale));
  }
  Mat3 rotation() {
    Eigen::Quaterniond q(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
    return q.normalized().toRotationMatrix();
  }
  // Attitude with |pitch| < 60 deg.
  Mat3 moderate_rotation() {
    return euler_dcm(uniform(-3.1, 3.1), uniform(-1.0, 1.0), uniform(-3.1, 3.1));
  }
};

// True state and compensated IMU sample, plus the estimate obtained by
// applying an error-state vector under the library's conventions.
struct Perturbed {
  wheelins::NavState nav;
  wheelins::ImuSample imu;
};

inline Perturbed perturb(const wheelins::NavState& nav, const wheelins::ImuSample& imu,
                         const wheelins::filter::ErrorState& dx) {
  Perturbed p{nav, imu};
  p.nav.position += dx.segment<3>(0);
  p.nav.velocity += dx.segment<3>(3);
  p.nav.attitude = rodrigues(-dx.segment<3>(6)) * nav.attitude;
  p.imu.gyro = imu.gyro + dx.segment<3>(9) + imu.gyro.cwiseProduct(dx.segment<3>(15));
  p.imu.accel = imu.accel + dx.segment<3>(12) + imu.accel.cwiseProduct(dx.segment<3>(18));
  return p;
}

template <int M>
using Jac = Eigen::Matrix<double, M, wheelins::filter::kStateDim>;

// Central differences of f over the 21 error-state coordinates.
template <int M>
Jac<M> numeric_jacobian(
    const std::function<Eigen::Matrix<double, M, 1>(const wheelins::filter::ErrorState&)>& f,
    double h) {
  Jac<M> j;
  for (int k = 0; k < wheelins::filter::kStateDim; ++k) {
    wheelins::filter::ErrorState d = wheelins::filter::ErrorState::Zero();
    d(k) = h;
    const auto plus = f(d);
    d(k) = -h;
    const auto minus = f(d);
    j.col(k) = (plus - minus) / (2.0 * h);
  }
  return j;
}

// max |a - b| <= rel * max(1, max |b|)
template <class A, class B>
bool close_relative(const A& a, const B& b, double rel) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() <= rel * scale;
}

}  // namespace oracle

#include <gtest/gtest.h>

#include "oracles.h"
#include "wheelins/errors.h"
#include "wheelins/geom.h"

using namespace wheelins;
using geom::kPi;

TEST(Geom, EulerZeroIsIdentity) {
  EXPECT_TRUE(geom::dcm_from_euler({0, 0, 0}).isApprox(Mat3::Identity(), 0.0));
}

TEST(Geom, PureHeadingQuarterTurn) {
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT((geom::dcm_from_euler({0, 0, kPi / 2}) - expected).cwiseAbs().maxCoeff(), 1e-15);
  const auto e = geom::euler_from_dcm(expected);
  EXPECT_NEAR(e.roll, 0.0, 1e-15);
  EXPECT_NEAR(e.pitch, 0.0, 1e-15);
  EXPECT_NEAR(e.heading, kPi / 2, 1e-15);
}

TEST(Geom, EulerMatchesElementaryRotations) {
  oracle::Random rnd(1);
  for (int i = 0; i < 200; ++i) {
    const double r = rnd.uniform(-3, 3), p = rnd.uniform(-1.5, 1.5), h = rnd.uniform(-3, 3);
    const Mat3 c = geom::dcm_from_euler({r, p, h});
    EXPECT_LT((c - oracle::euler_dcm(r, p, h)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_TRUE(geom::is_rotation(c));
  }
}

TEST(Geom, EulerRoundTrip) {
  oracle::Random rnd(2);
  for (int i = 0; i < 500; ++i) {
    const geom::EulerAngles e{rnd.uniform(-3.1, 3.1), rnd.uniform(-1.5, 1.5),
                              rnd.uniform(-3.1, 3.1)};
    const Mat3 c = geom::dcm_from_euler(e);
    const Mat3 again = geom::dcm_from_euler(geom::euler_from_dcm(c));
    EXPECT_LT((again - c).cwiseAbs().maxCoeff(), 1e-12);
    const auto back = geom::euler_from_dcm(c);
    EXPECT_NEAR(back.roll, e.roll, 1e-10);
    EXPECT_NEAR(back.pitch, e.pitch, 1e-10);
    EXPECT_NEAR(back.heading, e.heading, 1e-10);
  }
}

TEST(Geom, GimbalLockRejected) {
  const Mat3 c = geom::dcm_from_euler({0.1, kPi / 2 - 1e-12, 0.2});
  EXPECT_THROW(geom::euler_from_dcm(c), GimbalLock);
}

TEST(Geom, SkewIsCrossProduct) {
  EXPECT_TRUE(geom::skew(Vec3::Zero()).isZero(0.0));
  EXPECT_EQ(geom::skew(Vec3::UnitX()) * Vec3::UnitY(), Vec3::UnitZ());
  oracle::Random rnd(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 v = rnd.vec(5), w = rnd.vec(5);
    EXPECT_LT((geom::skew(v) * w - v.cross(w)).norm(), 1e-13);
    EXPECT_LT((geom::skew(v) * w + geom::skew(w) * v).norm(), 1e-13);
    EXPECT_TRUE((geom::skew(v) + geom::skew(v).transpose()).isZero(0.0));
  }
}

TEST(Geom, MountingMatrix) {
  EXPECT_TRUE(geom::dcm_body_to_wheel({0, 0}).isApprox(Mat3::Identity(), 0.0));
  Mat3 expected;
  expected << std::cos(0.01), 0, std::sin(0.01), 0, 1, 0, -std::sin(0.01), 0, std::cos(0.01);
  EXPECT_LT((geom::dcm_body_to_wheel({0.01, 0}) - expected).cwiseAbs().maxCoeff(), 1e-15);
  oracle::Random rnd(4);
  for (int i = 0; i < 100; ++i) {
    const double p = rnd.uniform(-0.2, 0.2), h = rnd.uniform(-0.2, 0.2);
    const Mat3 c = geom::dcm_body_to_wheel({p, h});
    EXPECT_TRUE(geom::is_rotation(c, 1e-12));
    // Heading misalignment about z after pitch about y.
    EXPECT_LT((c - oracle::euler_dcm(0, p, h)).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_THROW(geom::validate(geom::MountingAngles{0.25, 0.0}), ConfigError);
}

TEST(Geom, NavToVehicle) {
  EXPECT_TRUE(geom::dcm_nav_to_vehicle(0).isApprox(Mat3::Identity(), 0.0));
  const Vec3 north_seen_from_east = geom::dcm_nav_to_vehicle(kPi / 2) * Vec3::UnitX();
  EXPECT_LT((north_seen_from_east - Vec3(0, -1, 0)).norm(), 1e-15);
  oracle::Random rnd(5);
  for (int i = 0; i < 100; ++i) {
    const double psi = rnd.uniform(-4, 4);
    const Mat3 c = geom::dcm_nav_to_vehicle(psi);
    EXPECT_TRUE(geom::is_rotation(c));
    const Mat3 prod = c * geom::dcm_from_euler(geom::vehicle_euler(psi));
    EXPECT_LT((prod - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    // Forward motion along the heading reads as positive forward speed.
    const Vec3 v_n(std::cos(psi), std::sin(psi), 0);
    EXPECT_LT((c * v_n - Vec3::UnitX()).norm(), 1e-12);
  }
}

TEST(Geom, VehicleHeadingFromImu) {
  EXPECT_NEAR(geom::vehicle_heading_from_imu(kPi / 2), 0.0, 1e-15);
  EXPECT_NEAR(geom::vehicle_heading_from_imu(0.0), -kPi / 2, 1e-15);
  EXPECT_NEAR(geom::vehicle_heading_from_imu(-3 * kPi / 4), 3 * kPi / 4, 1e-15);
  oracle::Random rnd(6);
  for (int i = 0; i < 200; ++i) {
    const double x = rnd.uniform(-10, 10);
    const double back = geom::vehicle_heading_from_imu(geom::imu_heading_from_vehicle(x));
    EXPECT_NEAR(geom::angle_diff(back, x), 0.0, 1e-12);
    EXPECT_GT(back, -kPi);
    EXPECT_LE(back, kPi);
  }
}

TEST(Geom, VehicleEuler) {
  const auto e = geom::vehicle_euler(1.0);
  EXPECT_EQ(e.roll, 0.0);
  EXPECT_EQ(e.pitch, 0.0);
  EXPECT_EQ(e.heading, 1.0);
  const auto z = geom::vehicle_euler(0.0);
  EXPECT_EQ(z.heading, 0.0);
}

TEST(Geom, WrapRange) {
  EXPECT_DOUBLE_EQ(geom::wrap_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(geom::wrap_angle(kPi), kPi);
  EXPECT_NEAR(geom::wrap_angle(3 * kPi), kPi, 1e-15);
  EXPECT_NEAR(geom::angle_diff(179 * geom::kDeg, -179 * geom::kDeg), -2 * geom::kDeg, 1e-14);
}

TEST(Geom, RotationExpLog) {
  oracle::Random rnd(7);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = rnd.vec(1.5);
    const Mat3 c = geom::rotation_exp(v);
    EXPECT_LT((c - oracle::rodrigues(v)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((geom::rotation_log(c) - v).norm(), 1e-12);
  }
  EXPECT_LT((geom::rotation_exp(Vec3(1e-14, 0, 0)) - Mat3::Identity()).norm(), 1e-13);
}

TEST(Geom, OrthonormalizeRestoresRotation) {
  oracle::Random rnd(8);
  for (int i = 0; i < 50; ++i) {
    const Mat3 c = rnd.rotation();
    const Mat3 noisy = c + 1e-6 * Mat3::Random();
    const Mat3 fixed = geom::orthonormalize(noisy);
    EXPECT_TRUE(geom::is_rotation(fixed, 1e-12));
    EXPECT_LT((fixed - c).cwiseAbs().maxCoeff(), 1e-5);
  }
}

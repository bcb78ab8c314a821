#include "test_support.hpp"

#include <attsync/attitude_math.hpp>
#include <attsync/errors.hpp>

#include <doctest.h>

#include <numbers>

using namespace attsync;
using attsync::testing::random_vec;

TEST_SUITE("attitude_math") {

TEST_CASE("skew matches the cross product") {
  CHECK(skew(Vec3d::Zero()).isZero(0.0));

  Mat3d expected;
  expected << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  CHECK(skew(Vec3d(1, 2, 3)) == expected);

  const Vec3d x(0.3, -0.2, 0.5);
  CHECK(skew(x) * x == Vec3d::Zero());

  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Vec3d a = random_vec(rng, 2.0), b = random_vec(rng, 2.0);
    CHECK((skew(a) * b - a.cross(b)).norm() <= 1e-15);
    CHECK((skew(a) + skew(a).transpose()).isZero(0.0));
  }
}

TEST_CASE("kinematics matrix values") {
  CHECK(kinematics_matrix(Vec3d::Zero()) == 0.25 * Mat3d::Identity());

  Mat3d expected;
  expected << 0.1675, 0.265, -0.125,
              -0.235, 0.2075, 0.125,
              0.175, 0.025, 0.2875;
  const Vec3d sigma(0.1, 0.3, 0.5);
  const Mat3d G = kinematics_matrix(sigma);
  CHECK((G - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((G * G.transpose() - 0.11390625 * Mat3d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("kinematics matrix scaled orthogonality") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Vec3d sigma = random_vec(rng, 1.0);
    const double q = (1.0 + sigma.squaredNorm()) / 4.0;
    const Mat3d G = kinematics_matrix(sigma);
    CHECK((G * G.transpose() - q * q * Mat3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("closed-form inverse") {
  CHECK(kinematics_matrix_inverse(Vec3d::Zero()) == 4.0 * Mat3d::Identity());

  const Vec3d unit(1, 0, 0);
  CHECK((kinematics_matrix_inverse(unit) - 4.0 * kinematics_matrix(unit).transpose())
            .cwiseAbs()
            .maxCoeff() <= 1e-15);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const Vec3d sigma = random_vec(rng, 1.0);
    const Mat3d G = kinematics_matrix(sigma);
    const Mat3d Ginv = kinematics_matrix_inverse(sigma);
    CHECK((Ginv * G - Mat3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((Ginv - G.inverse()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("kinematics matrix derivative") {
  std::mt19937_64 rng(7);
  CHECK(kinematics_matrix_dot(random_vec(rng, 1.0), Vec3d::Zero()).isZero(0.0));

  Mat3d at_rest;
  at_rest << 0, 0, 0, 0, 0, 0.5, 0, -0.5, 0;
  CHECK(kinematics_matrix_dot(Vec3d::Zero(), Vec3d(1, 0, 0)) == at_rest);

  const double h = 1e-5;
  for (int k = 0; k < 1000; ++k) {
    const Vec3d sigma = random_vec(rng, 1.0);
    const Vec3d rate = random_vec(rng, 1.0);
    const Mat3d fd =
        (kinematics_matrix(Vec3d(sigma + h * rate)) - kinematics_matrix(Vec3d(sigma - h * rate))) /
        (2 * h);
    CHECK((kinematics_matrix_dot(sigma, rate) - fd).norm() <= 1e-6);
  }
}

TEST_CASE("L operator reproduces J a") {
  const Vec3d a(1, 2, 3);
  CHECK(l_operator(Vec3d::Zero()).isZero(0.0));
  CHECK(l_operator(a) * theta_from_inertia(Mat3d::Identity()) == a);

  ThetaVecd theta_j4;
  theta_j4 << 1.2, 0.3, 0.7, 0.9, 0.2, 1.4;
  CHECK((l_operator(a) * theta_j4 - Vec3d(3.9, 2.7, 5.3)).norm() <= 1e-14);

  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const Mat3d J = attsync::testing::sample_inertia(rng, k);
    const Vec3d v = random_vec(rng, 3.0);
    const Vec3d direct = J * v;
    CHECK((l_operator(v) * theta_from_inertia(J) - direct).norm() <= 1e-10 * (1 + direct.norm()));
  }
}

TEST_CASE("F operator reproduces (J x) cross v") {
  const ThetaVecd identity = theta_from_inertia(Mat3d::Identity());
  CHECK(f_operator(Vec3d(1, 0, 0), Vec3d(0, 1, 0)) * identity == Vec3d(0, 0, 1));

  std::mt19937_64 rng(17);
  const Vec3d x = random_vec(rng, 1.0);
  CHECK((f_operator(x, x) * identity).norm() <= 1e-15);

  const ThetaVecd theta_j2 = theta_from_inertia(paper_inertias()[1]);
  for (int k = 0; k < 1000; ++k) {
    const Vec3d p = random_vec(rng, 2.0), v = random_vec(rng, 2.0);
    const Vec3d direct = (paper_inertias()[1] * p).cross(v);
    CHECK((f_operator(p, v) * theta_j2 - direct).norm() <= 1e-12);

    const Mat3d J = attsync::testing::sample_inertia(rng, k);
    const Vec3d general = (J * p).cross(v);
    CHECK((f_operator(p, v) * theta_from_inertia(J) - general).norm() <= 1e-10 * (1 + general.norm()));
  }
}

TEST_CASE("operators are linear in their vector arguments") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 100; ++k) {
    const Vec3d a = random_vec(rng, 1.0), b = random_vec(rng, 1.0), x = random_vec(rng, 1.0);
    const double c = 1.7;
    CHECK((l_operator(Vec3d(a + c * b)) - l_operator(a) - c * l_operator(b)).norm() <= 1e-14);
    CHECK((f_operator(x, Vec3d(a + c * b)) - f_operator(x, a) - c * f_operator(x, b)).norm() <=
          1e-14);
    CHECK((f_operator(Vec3d(a + c * b), x) - f_operator(a, x) - c * f_operator(b, x)).norm() <=
          1e-14);
  }
}

TEST_CASE("inertia parameter packing") {
  ThetaVecd expected;
  expected << 1, 0, 0, 1, 0, 1;
  CHECK(theta_from_inertia(Mat3d::Identity()) == expected);

  Mat3d j1;
  j1 << 1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.9;
  expected << 1, 0.1, 0.1, 0.1, 0.1, 0.9;
  CHECK(theta_from_inertia(j1) == expected);

  const Mat3d j5 = paper_inertias()[4];
  CHECK(inertia_from_theta(theta_from_inertia(j5)) == j5);

  Mat3d skewed = j5;
  skewed(0, 1) += 1e-6;
  CHECK_THROWS_AS(theta_from_inertia(skewed), ValidationError);
}

TEST_CASE("MRP from axis and angle") {
  std::mt19937_64 rng(23);
  const Vec3d axis = random_vec(rng, 1.0).normalized();
  CHECK(mrp_from_axis_angle(axis, 0.0) == Vec3d::Zero());
  CHECK((mrp_from_axis_angle(Vec3d(0, 0, 1), std::numbers::pi) - Vec3d(0, 0, 1)).norm() <= 1e-15);
  CHECK_THROWS_AS(mrp_from_axis_angle(Vec3d(1, 0, 0), 2 * std::numbers::pi), ValidationError);
  CHECK_THROWS_AS(mrp_from_axis_angle(Vec3d(1, 1, 0), 0.5), ValidationError);
}

TEST_CASE("shadow MRP") {
  const Vec3d sigma(0.6, -0.8, 0.0);
  CHECK((shadow_mrp(sigma) + sigma).norm() <= 1e-15);
  CHECK((shadow_mrp(Vec3d(2, 0, 0)) - Vec3d(-0.5, 0, 0)).norm() <= 1e-15);
  CHECK_THROWS_AS(shadow_mrp(Vec3d::Zero()), ValidationError);

  // Rotating by angle - 2 pi about the same axis is the same attitude.
  const Vec3d axis = Vec3d(1, 2, 2) / 3.0;
  const double angle = 1.0;
  CHECK((shadow_mrp(mrp_from_axis_angle(axis, angle)) -
         mrp_from_axis_angle(axis, angle - 2 * std::numbers::pi))
            .norm() <= 1e-12);
}

}

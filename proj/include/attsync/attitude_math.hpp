#pragma once

// Small fixed-size algebra for MRP attitude kinematics and the linear
// parameterization of rigid-body inertia terms. Everything is templated on
// the scalar type and takes Eigen expressions.

#include <attsync/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace attsync {

template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Mat3x6 = Eigen::Matrix<Scalar, 3, 6>;
template <typename Scalar> using Mat6 = Eigen::Matrix<Scalar, 6, 6>;

/// Inertia parameters packed as [J11, J12, J13, J22, J23, J33].
template <typename Scalar> using ThetaVec = Eigen::Matrix<Scalar, 6, 1>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Mat3x6d = Mat3x6<double>;
using Mat6d = Mat6<double>;
using ThetaVecd = ThetaVec<double>;

/// Cross-product matrix: skew(x) * y == x.cross(y).
template <typename Derived>
Mat3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& x) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  Mat3<Scalar> m;
  m << Scalar(0), -x(2), x(1),
       x(2), Scalar(0), -x(0),
       -x(1), x(0), Scalar(0);
  return m;
}

/// MRP kinematics matrix G(sigma), with sigma_dot = G(sigma) * omega.
template <typename Derived>
Mat3<typename Derived::Scalar> kinematics_matrix(const Eigen::MatrixBase<Derived>& sigma) {
  using Scalar = typename Derived::Scalar;
  const Vec3<Scalar> s = sigma;
  const Scalar ss = s.squaredNorm();
  return Scalar(0.5) * ((Scalar(1) - ss) / Scalar(2) * Mat3<Scalar>::Identity() - skew(s) +
                        s * s.transpose());
}

/// Closed-form inverse of G(sigma).
///
/// G * G^T = ((1 + |sigma|^2) / 4)^2 * I, so G^-1 = 16 / (1 + |sigma|^2)^2 * G^T.
/// Defined for every finite sigma.
template <typename Derived>
Mat3<typename Derived::Scalar> kinematics_matrix_inverse(const Eigen::MatrixBase<Derived>& sigma) {
  using Scalar = typename Derived::Scalar;
  const Vec3<Scalar> s = sigma;
  const Scalar q = Scalar(1) + s.squaredNorm();
  return (Scalar(16) / (q * q)) * kinematics_matrix(s).transpose();
}

/// Time derivative of G(sigma) along sigma_dot.
template <typename DerivedA, typename DerivedB>
Mat3<typename DerivedA::Scalar> kinematics_matrix_dot(const Eigen::MatrixBase<DerivedA>& sigma,
                                                      const Eigen::MatrixBase<DerivedB>& sigma_dot) {
  using Scalar = typename DerivedA::Scalar;
  const Vec3<Scalar> s = sigma;
  const Vec3<Scalar> sd = sigma_dot;
  return Scalar(0.5) * (-s.dot(sd) * Mat3<Scalar>::Identity() - skew(sd) + sd * s.transpose() +
                        s * sd.transpose());
}

/// L(a) with J * a == L(a) * theta(J) for every symmetric J.
template <typename Derived>
Mat3x6<typename Derived::Scalar> l_operator(const Eigen::MatrixBase<Derived>& a) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  const Scalar z(0);
  Mat3x6<Scalar> m;
  m << a(0), a(1), a(2), z, z, z,
       z, a(0), z, a(1), a(2), z,
       z, z, a(0), z, a(1), a(2);
  return m;
}

/// F(x, v) with skew(J * x) * v == F(x, v) * theta(J) for every symmetric J.
template <typename DerivedA, typename DerivedB>
Mat3x6<typename DerivedA::Scalar> f_operator(const Eigen::MatrixBase<DerivedA>& x,
                                             const Eigen::MatrixBase<DerivedB>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedA, 3);
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedB, 3);
  using Scalar = typename DerivedA::Scalar;
  const Scalar z(0);
  const Scalar x1 = x(0), x2 = x(1), x3 = x(2);
  const Scalar v1 = v(0), v2 = v(1), v3 = v(2);
  Mat3x6<Scalar> m;
  m << z, x1 * v3, -x1 * v2, x2 * v3, -x2 * v2 + x3 * v3, -x3 * v2,
       -x1 * v3, -x2 * v3, x1 * v1 - x3 * v3, z, x2 * v1, x3 * v1,
       x1 * v2, -x1 * v1 + x2 * v2, x3 * v2, -x2 * v1, -x3 * v1, z;
  return m;
}

/// Largest |J - J^T| entry accepted as symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

template <typename Derived>
ThetaVec<typename Derived::Scalar> theta_from_inertia(const Eigen::MatrixBase<Derived>& J) {
  using Scalar = typename Derived::Scalar;
  const Mat3<Scalar> m = J;
  using std::abs;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(kSymmetryTolerance)) {
    throw ValidationError("inertia matrix is not symmetric");
  }
  ThetaVec<Scalar> theta;
  theta << m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2);
  return theta;
}

template <typename Derived>
Mat3<typename Derived::Scalar> inertia_from_theta(const Eigen::MatrixBase<Derived>& theta) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 6);
  using Scalar = typename Derived::Scalar;
  Mat3<Scalar> m;
  m << theta(0), theta(1), theta(2),
       theta(1), theta(3), theta(4),
       theta(2), theta(4), theta(5);
  return m;
}

/// sigma = axis * tan(angle / 4). Rejects |angle| >= 2*pi, where the MRP is singular.
template <typename Derived>
Vec3<typename Derived::Scalar> mrp_from_axis_angle(const Eigen::MatrixBase<Derived>& axis,
                                                   typename Derived::Scalar angle) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::tan;
  if (abs(axis.norm() - Scalar(1)) > Scalar(1e-9)) {
    throw ValidationError("rotation axis must be a unit vector");
  }
  if (!(abs(angle) < Scalar(2) * std::numbers::pi_v<Scalar>)) {
    throw ValidationError("rotation angle must satisfy |angle| < 2*pi for an MRP");
  }
  return axis * tan(angle / Scalar(4));
}

/// Shadow MRP -sigma / |sigma|^2, describing the same attitude.
template <typename Derived>
Vec3<typename Derived::Scalar> shadow_mrp(const Eigen::MatrixBase<Derived>& sigma) {
  const auto ss = sigma.squaredNorm();
  if (ss == 0) {
    throw ValidationError("the zero MRP has no finite shadow");
  }
  return -sigma / ss;
}

}  // namespace attsync

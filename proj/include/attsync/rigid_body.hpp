#pragma once

// Single-spacecraft rotational dynamics, both in body rates and in the
// Euler-Lagrange MRP form H*(sigma) sigma_ddot + C*(sigma, sigma_dot) sigma_dot = G^-T u.

#include <attsync/attitude_math.hpp>

#include <cmath>

namespace attsync {

/// Symmetric positive-definite inertia matrix together with its theta packing.
template <typename Scalar>
class InertiaParams {
public:
  /// Throws ValidationError unless J is symmetric with positive leading principal minors.
  explicit InertiaParams(const Mat3<Scalar>& J) : theta_(theta_from_inertia(J)) {
    matrix_ = inertia_from_theta(theta_);
    const Scalar m1 = matrix_(0, 0);
    const Scalar m2 = matrix_.template topLeftCorner<2, 2>().determinant();
    const Scalar m3 = matrix_.determinant();
    if (!(m1 > Scalar(0) && m2 > Scalar(0) && m3 > Scalar(0))) {
      throw ValidationError("inertia matrix is not positive definite");
    }
    inverse_ = matrix_.inverse();
  }

  static InertiaParams from_theta(const ThetaVec<Scalar>& theta) {
    return InertiaParams(inertia_from_theta(theta));
  }

  const Mat3<Scalar>& matrix() const { return matrix_; }
  const Mat3<Scalar>& inverse() const { return inverse_; }
  const ThetaVec<Scalar>& theta() const { return theta_; }

private:
  ThetaVec<Scalar> theta_;
  Mat3<Scalar> matrix_;
  Mat3<Scalar> inverse_;
};

using InertiaParamsd = InertiaParams<double>;

template <typename Scalar>
struct SpacecraftState {
  Vec3<Scalar> sigma = Vec3<Scalar>::Zero();
  Vec3<Scalar> omega = Vec3<Scalar>::Zero();
};

using SpacecraftStated = SpacecraftState<double>;

/// omega_dot = J^-1 (-omega x J omega + u).
template <typename Scalar>
Vec3<Scalar> angular_acceleration(const InertiaParams<Scalar>& inertia, const Vec3<Scalar>& omega,
                                  const Vec3<Scalar>& torque) {
  const Mat3<Scalar>& J = inertia.matrix();
  return inertia.inverse() * (-omega.cross(J * omega) + torque);
}

template <typename Scalar>
Vec3<Scalar> mrp_rate(const Vec3<Scalar>& sigma, const Vec3<Scalar>& omega) {
  return kinematics_matrix(sigma) * omega;
}

/// sigma_ddot = Gdot(sigma, sigma_dot) omega + G(sigma) omega_dot.
template <typename Scalar>
Vec3<Scalar> mrp_acceleration(const InertiaParams<Scalar>& inertia, const Vec3<Scalar>& sigma,
                              const Vec3<Scalar>& omega, const Vec3<Scalar>& torque) {
  const Mat3<Scalar> G = kinematics_matrix(sigma);
  const Vec3<Scalar> sigma_dot = G * omega;
  return kinematics_matrix_dot(sigma, sigma_dot) * omega +
         G * angular_acceleration(inertia, omega, torque);
}

/// H* = G^-T J G^-1. Symmetric positive definite.
template <typename Scalar>
Mat3<Scalar> h_star(const InertiaParams<Scalar>& inertia, const Vec3<Scalar>& sigma) {
  const Mat3<Scalar> Ginv = kinematics_matrix_inverse(sigma);
  return Ginv.transpose() * inertia.matrix() * Ginv;
}

/// C* = -H* Gdot G^-1 - G^-T S(J G^-1 sigma_dot) G^-1.
///
/// The first term carries a minus sign: omega = G^-1 sigma_dot differentiates to
/// G^-1 sigma_ddot - G^-1 Gdot G^-1 sigma_dot. With this sign H*_dot - 2 C* is skew.
template <typename Scalar>
Mat3<Scalar> c_star(const InertiaParams<Scalar>& inertia, const Vec3<Scalar>& sigma,
                    const Vec3<Scalar>& sigma_dot) {
  const Mat3<Scalar> Ginv = kinematics_matrix_inverse(sigma);
  const Mat3<Scalar> Gdot = kinematics_matrix_dot(sigma, sigma_dot);
  const Mat3<Scalar>& J = inertia.matrix();
  return -Ginv.transpose() * J * Ginv * Gdot * Ginv -
         Ginv.transpose() * skew(J * (Ginv * sigma_dot)) * Ginv;
}

/// Regression matrix Y with Y * theta(J) == H*(sigma) a_r + C*(sigma, sigma_dot) v_r.
///
/// v_r is the reference velocity and a_r the reference acceleration. Expanding
/// H* and C* through J a = L(a) theta and S(J x) v = F(x, v) theta gives
///   Y = G^-T ( L(G^-1 a_r) - L(G^-1 Gdot G^-1 v_r) - F(G^-1 sigma_dot, G^-1 v_r) ).
/// Y does not depend on the inertia.
template <typename Scalar>
Mat3x6<Scalar> regression(const Vec3<Scalar>& sigma, const Vec3<Scalar>& sigma_dot,
                          const Vec3<Scalar>& v_r, const Vec3<Scalar>& a_r) {
  const Mat3<Scalar> Ginv = kinematics_matrix_inverse(sigma);
  const Mat3<Scalar> Gdot = kinematics_matrix_dot(sigma, sigma_dot);
  const Vec3<Scalar> body_v_r = Ginv * v_r;
  return Ginv.transpose() * (l_operator(Ginv * a_r) - l_operator(Ginv * (Gdot * body_v_r)) -
                             f_operator(Ginv * sigma_dot, body_v_r));
}

template <typename Scalar>
Scalar kinetic_energy(const InertiaParams<Scalar>& inertia, const Vec3<Scalar>& omega) {
  return Scalar(0.5) * omega.dot(inertia.matrix() * omega);
}

}  // namespace attsync

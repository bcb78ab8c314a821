#pragma once

// Distributed adaptive attitude controllers.
//
// The leaderless synchronization law and the leader-follower tracking law are
// the same arithmetic applied to different neighborhood signals: only the
// aggregate (with or without the virtual leader) changes.

#include <attsync/attitude_math.hpp>
#include <attsync/errors.hpp>
#include <attsync/rigid_body.hpp>

#include <Eigen/Cholesky>

#include <string>
#include <utility>

namespace attsync {

template <typename Scalar>
struct GainSet {
  Mat3<Scalar> lambda = Mat3<Scalar>::Identity();
  Mat3<Scalar> k = Mat3<Scalar>::Identity();
  /// Diagonal of the adaptation-rate matrix.
  ThetaVec<Scalar> gamma = ThetaVec<Scalar>::Ones();

  static GainSet uniform(Scalar lambda, Scalar k, Scalar gamma) {
    GainSet g;
    g.lambda = lambda * Mat3<Scalar>::Identity();
    g.k = k * Mat3<Scalar>::Identity();
    g.gamma = ThetaVec<Scalar>::Constant(gamma);
    return g;
  }

  Mat6<Scalar> gamma_matrix() const { return gamma.asDiagonal(); }

  /// Throws ValidationError unless lambda and k are symmetric positive definite
  /// and every gamma entry is positive.
  void validate() const {
    check_spd(lambda, "Lambda");
    check_spd(k, "K");
    if (!(gamma.array() > Scalar(0)).all() || !gamma.allFinite()) {
      throw ValidationError("Gamma must have strictly positive diagonal entries");
    }
  }

private:
  static void check_spd(const Mat3<Scalar>& m, const char* name) {
    if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(kSymmetryTolerance)) {
      throw ValidationError(std::string(name) + " must be symmetric");
    }
    Eigen::LLT<Mat3<Scalar>> llt(m);
    if (llt.info() != Eigen::Success) {
      throw ValidationError(std::string(name) + " must be positive definite");
    }
  }
};

using GainSetd = GainSet<double>;

/// Neighborhood attitude aggregate and its first two time derivatives.
template <typename Scalar>
struct NeighborhoodSignals {
  Vec3<Scalar> sigma_d = Vec3<Scalar>::Zero();
  Vec3<Scalar> sigma_d_dot = Vec3<Scalar>::Zero();
  Vec3<Scalar> sigma_d_ddot = Vec3<Scalar>::Zero();
};

using NeighborhoodSignalsd = NeighborhoodSignals<double>;

template <typename Scalar>
struct SyncError {
  Vec3<Scalar> e;
  Vec3<Scalar> e_dot;
};

template <typename Scalar>
SyncError<Scalar> sync_error(const Vec3<Scalar>& sigma, const Vec3<Scalar>& sigma_dot,
                             const NeighborhoodSignals<Scalar>& signals) {
  return {sigma - signals.sigma_d, sigma_dot - signals.sigma_d_dot};
}

/// s = e_dot + Lambda e.
template <typename Scalar>
Vec3<Scalar> filtered_error(const Vec3<Scalar>& e, const Vec3<Scalar>& e_dot,
                            const Mat3<Scalar>& lambda) {
  return e_dot + lambda * e;
}

/// Regression matrix evaluated at the controller's reference signals
/// v_r = sigma_d_dot - Lambda e and a_r = sigma_d_ddot - Lambda e_dot.
template <typename Scalar>
Mat3x6<Scalar> controller_regression(const Vec3<Scalar>& sigma, const Vec3<Scalar>& sigma_dot,
                                     const NeighborhoodSignals<Scalar>& signals,
                                     const SyncError<Scalar>& err, const Mat3<Scalar>& lambda) {
  const Vec3<Scalar> v_r = signals.sigma_d_dot - lambda * err.e;
  const Vec3<Scalar> a_r = signals.sigma_d_ddot - lambda * err.e_dot;
  return regression(sigma, sigma_dot, v_r, a_r);
}

/// u = G^T(sigma) (Y theta_hat - K s).
template <typename Scalar>
Vec3<Scalar> control_torque(const Vec3<Scalar>& sigma, const Vec3<Scalar>& sigma_dot,
                            const NeighborhoodSignals<Scalar>& signals, const SyncError<Scalar>& err,
                            const ThetaVec<Scalar>& theta_hat, const GainSet<Scalar>& gains) {
  const Mat3x6<Scalar> Y = controller_regression(sigma, sigma_dot, signals, err, gains.lambda);
  const Vec3<Scalar> s = filtered_error(err.e, err.e_dot, gains.lambda);
  return kinematics_matrix(sigma).transpose() * (Y * theta_hat - gains.k * s);
}

/// theta_hat_dot = -Gamma Y^T s. Lambda enters through the regression's reference signals.
template <typename Scalar>
ThetaVec<Scalar> adaptation_rate(const Vec3<Scalar>& sigma, const Vec3<Scalar>& sigma_dot,
                                 const NeighborhoodSignals<Scalar>& signals,
                                 const SyncError<Scalar>& err, const Vec3<Scalar>& s,
                                 const GainSet<Scalar>& gains) {
  const Mat3x6<Scalar> Y = controller_regression(sigma, sigma_dot, signals, err, gains.lambda);
  return -(gains.gamma.asDiagonal() * (Y.transpose() * s));
}

/// Everything one controller evaluation produces, computed with a single regression.
template <typename Scalar>
struct ControllerOutput {
  SyncError<Scalar> error;
  Vec3<Scalar> s;
  Mat3x6<Scalar> regression;
  Vec3<Scalar> torque;
  ThetaVec<Scalar> theta_hat_rate;
};

template <typename Scalar>
ControllerOutput<Scalar> evaluate_controller(const Vec3<Scalar>& sigma,
                                             const Vec3<Scalar>& sigma_dot,
                                             const NeighborhoodSignals<Scalar>& signals,
                                             const ThetaVec<Scalar>& theta_hat,
                                             const GainSet<Scalar>& gains) {
  ControllerOutput<Scalar> out;
  out.error = sync_error(sigma, sigma_dot, signals);
  out.s = filtered_error(out.error.e, out.error.e_dot, gains.lambda);
  out.regression = controller_regression(sigma, sigma_dot, signals, out.error, gains.lambda);
  out.torque = kinematics_matrix(sigma).transpose() * (out.regression * theta_hat - gains.k * out.s);
  out.theta_hat_rate = -(gains.gamma.asDiagonal() * (out.regression.transpose() * out.s));
  return out;
}

}  // namespace attsync

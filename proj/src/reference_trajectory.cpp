#include <attsync/errors.hpp>
#include <attsync/reference_trajectory.hpp>

#include <cmath>

namespace attsync {

ReferenceTrajectory ReferenceTrajectory::constant(const Vec3d& sigma) {
  if (!sigma.allFinite()) throw ValidationError("reference attitude must be finite");
  ReferenceTrajectory r;
  r.kind_ = Kind::constant;
  r.offset_ = sigma;
  return r;
}

ReferenceTrajectory ReferenceTrajectory::sinusoid(const Vec3d& amplitude, const Vec3d& frequency,
                                                  const Vec3d& phase, const Vec3d& offset) {
  if (!amplitude.allFinite() || !frequency.allFinite() || !phase.allFinite() ||
      !offset.allFinite()) {
    throw ValidationError("sinusoid reference parameters must be finite");
  }
  ReferenceTrajectory r;
  r.kind_ = Kind::sinusoid;
  r.amplitude_ = amplitude;
  r.frequency_ = frequency;
  r.phase_ = phase;
  r.offset_ = offset;
  return r;
}

ReferenceSample ReferenceTrajectory::at(double t) const {
  if (!(t >= 0.0)) throw ValidationError("reference time must be nonnegative");
  if (kind_ == Kind::constant) {
    return {offset_, Vec3d::Zero(), Vec3d::Zero()};
  }
  ReferenceSample out;
  for (int c = 0; c < 3; ++c) {
    const double w = frequency_(c);
    const double arg = w * t + phase_(c);
    const double sn = std::sin(arg);
    out.sigma(c) = amplitude_(c) * sn + offset_(c);
    out.sigma_dot(c) = amplitude_(c) * w * std::cos(arg);
    out.sigma_ddot(c) = -amplitude_(c) * w * w * sn;
  }
  return out;
}

}  // namespace attsync

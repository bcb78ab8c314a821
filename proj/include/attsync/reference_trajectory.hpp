#pragma once

#include <attsync/attitude_math.hpp>

namespace attsync {

struct ReferenceSample {
  Vec3d sigma;
  Vec3d sigma_dot;
  Vec3d sigma_ddot;
};

/// Reference attitude carried by the virtual leader.
///
/// Constant: sigma_r(t) = offset.
/// Sinusoid: componentwise amplitude * sin(frequency * t + phase) + offset,
/// with analytic first and second derivatives.
class ReferenceTrajectory {
public:
  enum class Kind { constant, sinusoid };

  ReferenceTrajectory() = default;

  static ReferenceTrajectory constant(const Vec3d& sigma);
  static ReferenceTrajectory sinusoid(const Vec3d& amplitude, const Vec3d& frequency,
                                      const Vec3d& phase, const Vec3d& offset);

  Kind kind() const { return kind_; }
  const Vec3d& amplitude() const { return amplitude_; }
  const Vec3d& frequency() const { return frequency_; }
  const Vec3d& phase() const { return phase_; }
  const Vec3d& offset() const { return offset_; }

  /// Throws ValidationError for t < 0.
  ReferenceSample at(double t) const;

private:
  Kind kind_ = Kind::constant;
  Vec3d amplitude_ = Vec3d::Zero();
  Vec3d frequency_ = Vec3d::Zero();
  Vec3d phase_ = Vec3d::Zero();
  Vec3d offset_ = Vec3d::Zero();
};

inline ReferenceSample reference_at(const ReferenceTrajectory& ref, double t) { return ref.at(t); }

}  // namespace attsync

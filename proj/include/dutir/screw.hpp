#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <span>

namespace dutir {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat63 = Eigen::Matrix<double, 6, 3>;

enum class ScrewKind { Twist, Wrench };

const char* to_string(ScrewKind kind) noexcept;

/// Six-dimensional screw (alpha, beta).
///
/// For a twist alpha is the angular velocity and beta the velocity of the
/// expression-frame origin; for a wrench alpha is the resultant force and beta
/// the torque about the origin. The kind is metadata: every operation in this
/// library treats both kinds identically, but arithmetic across kinds throws
/// KindMismatchError.
class Screw {
 public:
  Screw(const Vec3& alpha, const Vec3& beta, ScrewKind kind = ScrewKind::Twist);

  static Screw zero(ScrewKind kind = ScrewKind::Twist);

  const Vec3& alpha() const noexcept { return alpha_; }
  const Vec3& beta() const noexcept { return beta_; }
  ScrewKind kind() const noexcept { return kind_; }

  Eigen::Matrix<double, 6, 1> coords() const;

  Screw operator+(const Screw& other) const;
  Screw operator-(const Screw& other) const;
  Screw operator*(double s) const;

 private:
  Vec3 alpha_;
  Vec3 beta_;
  ScrewKind kind_;
};

inline Screw operator*(double s, const Screw& xi) { return xi * s; }

/// Cross-product matrix: skew(p) * v == p.cross(v).
Mat3 skew(const Vec3& p);

/// Rigid coordinate change (R, p) acting on screws as
/// [R 0; skew(p) R  R]. Only the pair is stored.
class ScrewTransform {
 public:
  static constexpr double kOrthonormalTolerance = 1e-12;

  /// Throws InvalidRotationError unless rotation is in SO(3) within
  /// kOrthonormalTolerance per entry.
  ScrewTransform(const Mat3& rotation, const Vec3& position);

  static ScrewTransform identity();

  const Mat3& rotation() const noexcept { return rotation_; }
  const Vec3& position() const noexcept { return position_; }

 private:
  Mat3 rotation_;
  Vec3 position_;
};

Screw transform_screw(const ScrewTransform& s, const Screw& xi);

/// Columnwise screw transform of a 6x3 stack of screws.
Mat63 transform_window(const ScrewTransform& s, const Mat63& xi);

/// s12 after s1: rotation R12 R1, position p12 + R12 p1.
ScrewTransform compose(const ScrewTransform& s12, const ScrewTransform& s1);

ScrewTransform inverse(const ScrewTransform& s);

/// Threshold below which |alpha| counts as zero: 1e-9 times the given
/// characteristic alpha scale.
constexpr double kDirectionTolerance = 1e-9;

/// Largest |alpha| over the samples, or 1 when every alpha vanishes.
double characteristic_alpha_scale(std::span<const Screw> samples);

/// Unit direction of the screw axis. Throws ZeroAlphaError when
/// |alpha| <= kDirectionTolerance * alpha_scale.
Vec3 axis_direction(const Screw& xi, double alpha_scale = 1.0);

/// Point of the screw axis closest to the origin, (alpha x beta) / |alpha|^2.
Vec3 closest_point(const Screw& xi, double alpha_scale = 1.0);

}  // namespace dutir

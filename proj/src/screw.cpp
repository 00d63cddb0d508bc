#include "dutir/screw.hpp"

#include <algorithm>
#include <cmath>

#include "dutir/error.hpp"

namespace dutir {

const char* to_string(ScrewKind kind) noexcept {
  return kind == ScrewKind::Twist ? "twist" : "wrench";
}

Screw::Screw(const Vec3& alpha, const Vec3& beta, ScrewKind kind)
    : alpha_(alpha), beta_(beta), kind_(kind) {
  if (!alpha_.allFinite() || !beta_.allFinite()) {
    throw NonFiniteError("screw components must be finite");
  }
}

Screw Screw::zero(ScrewKind kind) { return Screw(Vec3::Zero(), Vec3::Zero(), kind); }

Eigen::Matrix<double, 6, 1> Screw::coords() const {
  Eigen::Matrix<double, 6, 1> c;
  c << alpha_, beta_;
  return c;
}

namespace {

void require_same_kind(const Screw& a, const Screw& b) {
  if (a.kind() != b.kind()) {
    throw KindMismatchError(std::string("cannot combine a ") + to_string(a.kind()) +
                            " with a " + to_string(b.kind()));
  }
}

}  // namespace

Screw Screw::operator+(const Screw& other) const {
  require_same_kind(*this, other);
  return Screw(alpha_ + other.alpha_, beta_ + other.beta_, kind_);
}

Screw Screw::operator-(const Screw& other) const {
  require_same_kind(*this, other);
  return Screw(alpha_ - other.alpha_, beta_ - other.beta_, kind_);
}

Screw Screw::operator*(double s) const { return Screw(alpha_ * s, beta_ * s, kind_); }

Mat3 skew(const Vec3& p) {
  Mat3 m;
  m << 0.0, -p.z(), p.y(),
       p.z(), 0.0, -p.x(),
       -p.y(), p.x(), 0.0;
  return m;
}

ScrewTransform::ScrewTransform(const Mat3& rotation, const Vec3& position)
    : rotation_(rotation), position_(position) {
  if (!rotation_.allFinite() || !position_.allFinite()) {
    throw NonFiniteError("screw transform must be finite");
  }
  const double orth = (rotation_.transpose() * rotation_ - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (orth > kOrthonormalTolerance || std::abs(rotation_.determinant() - 1.0) > kOrthonormalTolerance) {
    throw InvalidRotationError("rotation is not a proper orthonormal matrix");
  }
}

ScrewTransform ScrewTransform::identity() { return ScrewTransform(Mat3::Identity(), Vec3::Zero()); }

Screw transform_screw(const ScrewTransform& s, const Screw& xi) {
  const Vec3 r_alpha = s.rotation() * xi.alpha();
  return Screw(r_alpha, s.position().cross(r_alpha) + s.rotation() * xi.beta(), xi.kind());
}

Mat63 transform_window(const ScrewTransform& s, const Mat63& xi) {
  Mat63 out;
  const Mat3 top = s.rotation() * xi.topRows<3>();
  out.topRows<3>() = top;
  out.bottomRows<3>() = skew(s.position()) * top + s.rotation() * xi.bottomRows<3>();
  return out;
}

ScrewTransform compose(const ScrewTransform& s12, const ScrewTransform& s1) {
  return ScrewTransform(s12.rotation() * s1.rotation(),
                        s12.position() + s12.rotation() * s1.position());
}

ScrewTransform inverse(const ScrewTransform& s) {
  const Mat3 rt = s.rotation().transpose();
  return ScrewTransform(rt, -(rt * s.position()));
}

double characteristic_alpha_scale(std::span<const Screw> samples) {
  double scale = 0.0;
  for (const auto& xi : samples) scale = std::max(scale, xi.alpha().norm());
  return scale > 0.0 ? scale : 1.0;
}

Vec3 axis_direction(const Screw& xi, double alpha_scale) {
  const double n = xi.alpha().norm();
  if (n <= kDirectionTolerance * alpha_scale) {
    throw ZeroAlphaError("screw axis direction undefined: alpha vanishes");
  }
  return xi.alpha() / n;
}

Vec3 closest_point(const Screw& xi, double alpha_scale) {
  const double n = xi.alpha().norm();
  if (n <= kDirectionTolerance * alpha_scale) {
    throw ZeroAlphaError("screw axis undefined: alpha vanishes");
  }
  return xi.alpha().cross(xi.beta()) / (n * n);
}

}  // namespace dutir

#include "dutir/su_decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace dutir {

const char* to_string(Regularity r) noexcept {
  switch (r) {
    case Regularity::Regular:
      return "regular";
    case Regularity::AlphaZero:
      return "alpha_zero";
    case Regularity::AlphaParallel:
      return "alpha_parallel";
  }
  return "unknown";
}

IrregularWindowError::IrregularWindowError(Regularity r)
    : Error(std::string("window is irregular (") + to_string(r) + ")"), regularity_(r) {}

Regularity check_regularity(const Mat3& a, double tol) {
  const Vec3 a1 = a.col(0);
  const Vec3 a2 = a.col(1);
  const double scale = std::max({a1.norm(), a2.norm(), 1e-300});
  if (a1.norm() <= tol * scale) return Regularity::AlphaZero;
  if (a1.cross(a2).norm() <= tol * scale * scale) return Regularity::AlphaParallel;
  return Regularity::Regular;
}

Regularity check_regularity(const LocalWindow& w, double tol) { return check_regularity(w.alpha_block(), tol); }

Orientation orient_from_alpha(const Mat3& a, double tol) {
  if (check_regularity(a, tol) != Regularity::Regular) {
    throw DegenerateColumnsError("first two columns are linearly dependent");
  }
  const Vec3 a1 = a.col(0);
  const Vec3 normal = a1.cross(a.col(1));

  // r2 = ((a1 x a2) x a1) / |...|, computed as r3 x r1. For nearly parallel
  // columns the rounded cross product drifts off a1, so project it back.
  Mat3 r;
  r.col(0) = a1.normalized();
  const Vec3 n = normal.normalized();
  r.col(2) = (n - n.dot(r.col(0)) * r.col(0)).normalized();
  r.col(1) = r.col(2).cross(r.col(0));

  Mat3 u = r.transpose() * a;
  u(0, 0) = a1.norm();
  u(1, 0) = u(2, 0) = u(2, 1) = 0.0;
  return {r, u};
}

Vec3 solve_p_star(const Mat3& rotation, const Mat3& b, const Mat3& u1, double tol) {
  const double scale = std::max({std::abs(u1(0, 0)), std::hypot(u1(0, 1), u1(1, 1)), 1e-300});
  if (std::abs(u1(0, 0)) <= tol * scale || std::abs(u1(1, 1)) <= tol * scale) {
    throw SingularError("u11 or u22 vanishes; p* is undetermined");
  }
  const Mat3 m = rotation.transpose() * b;
  Vec3 p;
  p.z() = m(1, 0) / u1(0, 0);
  p.y() = -m(2, 0) / u1(0, 0);
  p.x() = (m(2, 1) + u1(0, 1) * p.y()) / u1(1, 1);
  return p;
}

Mat3 compute_u2(const Mat3& rotation, const Mat3& b, const Mat3& u1, const Vec3& p_star) {
  return rotation.transpose() * b - skew(p_star) * u1;
}

SuResult su_decompose(const LocalWindow& w, double tol) {
  const Regularity reg = check_regularity(w, tol);
  if (reg != Regularity::Regular) throw IrregularWindowError(reg);

  const Mat3 b = w.beta_block();
  const auto [r, u1] = orient_from_alpha(w.alpha_block(), tol);
  const Vec3 p_star = solve_p_star(r, b, u1, tol);
  Mat3 u2 = compute_u2(r, b, u1, p_star);
  u2(1, 0) = u2(2, 0) = u2(2, 1) = 0.0;

  SuResult result;
  result.s = ScrewTransform(r, r * p_star);
  result.u.u << u1, u2;
  result.p_star = p_star;
  result.regularity = reg;
  return result;
}

Mat63 reconstruct(const ScrewTransform& s, const DutirU& u) {
  const Mat3 top = s.rotation() * u.upper();
  Mat63 xi;
  xi.topRows<3>() = top;
  xi.bottomRows<3>() = skew(s.position()) * top + s.rotation() * u.lower();
  return xi;
}

double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& reference) {
  const double denom = std::max(reference.cwiseAbs().maxCoeff(), 1e-300);
  return (a - reference).cwiseAbs().maxCoeff() / denom;
}

}  // namespace dutir

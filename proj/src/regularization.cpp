#include "dutir/regularization.hpp"

#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <limits>

namespace dutir {

void RegularizationConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidConfigError("geometric scale L must be positive");
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidConfigError("weight w must be positive");
}

Vec3 project_p_along_axis(const Vec3& p, double L) {
  const double sign = p.x() >= 0.0 ? 1.0 : -1.0;
  const double rest = L * L - p.y() * p.y() - p.z() * p.z();
  return Vec3(sign * std::sqrt(std::max(rest, 0.0)), p.y(), p.z());
}

Vec3 project_p_radially(const Vec3& p, double L) {
  const double n = std::hypot(p.y(), p.z());
  return Vec3(0.0, L * p.y() / n, L * p.z() / n);
}

RegularizedP regularize_p(const Vec3& p_star, double L) {
  if (p_star.norm() <= L) return {p_star, false};
  if (p_star.y() * p_star.y() + p_star.z() * p_star.z() <= L * L) {
    return {project_p_along_axis(p_star, L), true};
  }
  return {project_p_radially(p_star, L), true};
}

double epsilon_objective(const Vec3& p, double u11, const Mat3& rtb) {
  const double e51 = rtb(1, 0) - u11 * p.z();
  const double e61 = rtb(2, 0) + u11 * p.y();
  return e51 * e51 + e61 * e61;
}

Mat3 triangularize_u2(const Mat3& u2_hat, double tol) {
  try {
    return orient_from_alpha(u2_hat, tol).upper;
  } catch (const DegenerateColumnsError&) {
    throw DegenerateU2Error("U2-hat has dependent leading columns");
  }
}

Mat3 procrustes_rc(const Mat3& u1, const Mat3& u2_hat, const Mat3& u2_tri, double w) {
  const Mat3 m = w * w * u1 * u1.transpose() + u2_tri * u2_hat.transpose();
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& uu = svd.matrixU();
  const Mat3& vv = svd.matrixV();
  Vec3 d(1.0, 1.0, (uu * vv.transpose()).determinant() < 0.0 ? -1.0 : 1.0);
  return uu * d.asDiagonal() * vv.transpose();
}

double procrustes_objective(const Mat3& rc, const Mat3& u1, const Mat3& u2_hat, const Mat3& u2_tri, double w) {
  return w * w * (u1 - rc * u1).squaredNorm() + (u2_tri - rc * u2_hat).squaredNorm();
}

Orientation seed_orientation(const LocalWindow& w, Regularity regularity, double tol) {
  const Mat3 a = w.alpha_block();
  if (regularity == Regularity::Regular) return orient_from_alpha(a, tol);

  const Mat3 b = w.beta_block();
  const double alpha_scale = a.colwise().norm().maxCoeff();
  const double beta_scale = b.colwise().norm().maxCoeff();
  const std::array<Vec3, 6> candidates{a.col(0), a.col(1), a.col(2), b.col(0), b.col(1), b.col(2)};

  Vec3 r1 = Vec3::Zero();
  Vec3 r2 = Vec3::Zero();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Vec3& c = candidates[i];
    const double scale = i < 3 ? alpha_scale : beta_scale;
    const double n = c.norm();
    if (n == 0.0 || n <= tol * scale) continue;
    if (r1.isZero()) {
      r1 = c / n;
      continue;
    }
    const Vec3 rejection = c - c.dot(r1) * r1;
    if (rejection.norm() > tol * n) {
      r2 = rejection.normalized();
      r2 = (r2 - r2.dot(r1) * r1).normalized();
      break;
    }
  }

  Mat3 r = Mat3::Identity();
  if (!r1.isZero()) {
    if (r2.isZero()) {
      Eigen::Index k = 0;
      r1.cwiseAbs().minCoeff(&k);
      const Vec3 axis = Vec3::Unit(k);
      r2 = (axis - axis.dot(r1) * r1).normalized();
    }
    r.col(0) = r1;
    r.col(1) = r2;
    r.col(2) = r1.cross(r2);
  }

  Mat3 upper = r.transpose() * a;
  if (regularity == Regularity::AlphaParallel) {
    upper(1, 0) = upper(2, 0) = 0.0;
  }
  return {r, upper};
}

SuResult su_decompose_regularized(const LocalWindow& w, const RegularizationConfig& cfg, double tol) {
  cfg.validate();
  if (!cfg.enabled) return su_decompose(w, tol);

  const Regularity reg = check_regularity(w, tol);
  const auto [r, u1] = seed_orientation(w, reg, tol);
  const Mat3 b = w.beta_block();
  const Mat3 rtb = r.transpose() * b;

  // p* where the window determines it; undetermined components stay 0.
  Vec3 p_star = Vec3::Zero();
  if (reg == Regularity::Regular) {
    p_star = solve_p_star(r, b, u1, tol);
  } else if (reg == Regularity::AlphaParallel) {
    p_star.z() = rtb(1, 0) / u1(0, 0);
    p_star.y() = -rtb(2, 0) / u1(0, 0);
  }

  const auto [p_hat_star, p_active] = regularize_p(p_star, cfg.L);
  const Mat3 u2_hat = compute_u2(r, b, u1, p_hat_star);

  Mat3 rc = Mat3::Identity();
  try {
    // The triangular factor is unique only up to a proper sign flip of its
    // rows; take the variant that needs the least rotation.
    const Mat3 u2_tri = triangularize_u2(u2_hat, tol);
    // Ties (e.g. U1 = 0) keep the positive-diagonal target.
    const double margin = 1e-9 * (cfg.w * cfg.w * u1.squaredNorm() + u2_hat.squaredNorm());
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& signs : {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)}) {
      const Mat3 target = signs.asDiagonal() * u2_tri;
      const Mat3 candidate = procrustes_rc(u1, u2_hat, target, cfg.w);
      const double f = procrustes_objective(candidate, u1, u2_hat, target, cfg.w);
      if (f < best - margin) {
        best = f;
        rc = candidate;
      }
    }
  } catch (const DegenerateU2Error&) {
    // Nothing to align with; keep the seed orientation.
  }

  SuResult result;
  const Mat3 r_hat = r * rc.transpose();
  const Vec3 p_hat = r * p_hat_star;
  result.s = ScrewTransform(r_hat, p_hat);
  result.u.u << rc * u1, rc * u2_hat;
  result.u.regularized_p = p_active;
  result.u.regularized_R = (rc - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12;
  result.p_star = r_hat.transpose() * p_hat;
  result.regularity = reg;
  return result;
}

}  // namespace dutir

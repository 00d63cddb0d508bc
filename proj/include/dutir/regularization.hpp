#pragma once

#include "dutir/su_decomposition.hpp"

namespace dutir {

/// Geometric scale L (m) bounding |p*|, and the Procrustes weight w (m)
/// balancing the U1 and U2 terms. w defaults to L.
struct RegularizationConfig {
  double L = 1.0;
  double w = 1.0;
  bool enabled = true;

  static RegularizationConfig with_scale(double L) { return {L, L, true}; }
  /// Throws InvalidConfigError unless L > 0 and w > 0.
  void validate() const;
};

struct RegularizedP {
  Vec3 p_hat_star;
  bool active;
};

/// Keeps p* when |p*| <= L. Otherwise moves it onto the sphere of radius L:
/// along the first axis when the axis pierces the sphere
/// ((p*_y)^2 + (p*_z)^2 <= L^2), else radially in the y-z plane with x = 0.
RegularizedP regularize_p(const Vec3& p_star, double L);

/// Keeps y, z and sets x = sign(p*_x) sqrt(L^2 - y^2 - z^2); sign(0) = +1.
Vec3 project_p_along_axis(const Vec3& p_star, double L);
/// x = 0, (y, z) scaled to length L.
Vec3 project_p_radially(const Vec3& p_star, double L);

/// eps51^2 + eps61^2 for a candidate p-hat*.
double epsilon_objective(const Vec3& p_hat_star, double u11, const Mat3& rtb);

class DegenerateU2Error : public Error {
 public:
  using Error::Error;
};

/// Upper-triangular factor of U2-hat by the same procedure as orient_from_alpha.
Mat3 triangularize_u2(const Mat3& u2_hat, double tol = kRegularityTolerance);

/// Rotation Rc minimizing w^2 |U1 - Rc U1|^2 + |U2_tri - Rc U2_hat|^2
/// (Frobenius). Closed form: SVD of M = w^2 U1 U1^T + U2_tri U2_hat^T,
/// Rc = U diag(1, 1, det(U V^T)) V^T. Ties in a rank-deficient M follow
/// Eigen's JacobiSVD ordering.
Mat3 procrustes_rc(const Mat3& u1, const Mat3& u2_hat, const Mat3& u2_tri, double w);

double procrustes_objective(const Mat3& rc, const Mat3& u1, const Mat3& u2_hat, const Mat3& u2_tri, double w);

/// Orientation seeding the regularized path. Regular windows use
/// orient_from_alpha. Otherwise r1 is the first usable vector among
/// (alpha_prev, alpha_curr, alpha_next, beta_prev, beta_curr, beta_next), r2 the
/// rejection of the next usable one, and the world axis least aligned with r1
/// completes the frame when nothing else is left (identity when the window is
/// all zeros). `upper` is R^T A.
Orientation seed_orientation(const LocalWindow& w, Regularity regularity, double tol = kRegularityTolerance);

/// Total decomposition Xi = S-hat U-hat for any window. Exact reconstruction
/// is preserved; only the split between S and U moves. Falls back to
/// su_decompose when cfg.enabled is false.
SuResult su_decompose_regularized(const LocalWindow& w, const RegularizationConfig& cfg,
                                  double tol = kRegularityTolerance);

}  // namespace dutir

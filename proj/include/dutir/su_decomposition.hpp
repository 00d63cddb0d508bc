#pragma once

#include "dutir/error.hpp"
#include "dutir/screw.hpp"
#include "dutir/trajectory.hpp"

namespace dutir {

/// Default relative tolerance for the regularity test.
constexpr double kRegularityTolerance = 1e-9;

enum class Regularity { Regular, AlphaZero, AlphaParallel };

const char* to_string(Regularity r) noexcept;

class IrregularWindowError : public Error {
 public:
  explicit IrregularWindowError(Regularity r);
  Regularity regularity() const noexcept { return regularity_; }

 private:
  Regularity regularity_;
};

class DegenerateColumnsError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

/// The invariant factor U = [U1; U2] of a window.
///
/// Rows 1-3 (U1) are upper-triangular. The lower entries of U2 at (5,1),
/// (6,1), (6,2) are the residuals eps51, eps61, eps62; they are exactly zero
/// on the exact path. On the regularized path the rotational correction can
/// also leave small entries below the diagonal of U1; they are kept so that
/// reconstruction stays exact.
struct DutirU {
  Mat63 u = Mat63::Zero();
  bool regularized_p = false;
  bool regularized_R = false;

  Mat3 upper() const { return u.topRows<3>(); }
  Mat3 lower() const { return u.bottomRows<3>(); }
  /// (eps51, eps61, eps62).
  Vec3 epsilon() const { return Vec3(u(4, 0), u(5, 0), u(5, 1)); }
  /// Entry u_jk with 1-based indices, matching the usual u11..u63 naming.
  double at(int j, int k) const { return u(j - 1, k - 1); }
};

struct SuResult {
  ScrewTransform s = ScrewTransform::identity();
  DutirU u;
  /// p* = R^T p.
  Vec3 p_star = Vec3::Zero();
  Regularity regularity = Regularity::Regular;
};

Regularity check_regularity(const LocalWindow& w, double tol = kRegularityTolerance);
Regularity check_regularity(const Mat3& alpha_block, double tol = kRegularityTolerance);

struct Orientation {
  Mat3 rotation;
  Mat3 upper;
};

/// A = R * U1 with R right-handed, u11 > 0, u22 > 0. r1 is the direction of
/// the first column and r2 the normalized rejection of the second column from
/// the first; r3 = r1 x r2 fixes the sign of u33. Throws
/// DegenerateColumnsError when the first two columns are (nearly) dependent.
Orientation orient_from_alpha(const Mat3& a, double tol = kRegularityTolerance);

/// Solves the three lower-diagonal equations of R^T B = [p*]x U1 + U2 for p*.
/// Throws SingularError when u11 or u22 vanishes.
Vec3 solve_p_star(const Mat3& rotation, const Mat3& b, const Mat3& u1, double tol = kRegularityTolerance);

/// U2 = R^T B - [p*]x U1 (lower entries returned as computed).
Mat3 compute_u2(const Mat3& rotation, const Mat3& b, const Mat3& u1, const Vec3& p_star);

/// Exact decomposition Xi = S U. Throws IrregularWindowError.
SuResult su_decompose(const LocalWindow& w, double tol = kRegularityTolerance);

/// S U via the block formulas: top R U1, bottom [p]x R U1 + R U2.
Mat63 reconstruct(const ScrewTransform& s, const DutirU& u);

/// max |a - b| / max |b| (b taken as reference; floor 1e-300).
double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& reference);

}  // namespace dutir

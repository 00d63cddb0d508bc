#pragma once

#include <array>
#include <string>

#include "dutir/su_decomposition.hpp"

namespace dutir {

// Line geometry of two screw axes, computed from the raw screws only. Used to
// cross-check the frame (R, p) produced by the decomposition: r1 along the
// first axis, r3 along the common normal, p at the foot of the common normal
// on the first axis.

class IrregularPairError : public Error {
 public:
  using Error::Error;
};

struct AlphaRelations {
  double u11;
  double u12;
  double u22;
  /// Unit direction of alpha1 x alpha2.
  Vec3 r3;
  /// Angle between alpha1 and alpha2 in [0, pi].
  double theta;
};

/// u11 = |a1|, u11 u12 = a1.a2, a1 x a2 = u11 u22 r3. Throws IrregularPairError.
AlphaRelations alpha_relations(const Screw& xi1, const Screw& xi2, double tol = kRegularityTolerance);

/// Relative residual of |a1|^2 |a2|^2 - (a1.a2)^2 = u11^2 u22^2.
double quartic_identity_residual(const Screw& xi1, const Screw& xi2, const AlphaRelations& rel);

struct CommonNormalFoot {
  /// Point of axis 1 closest to axis 2.
  Vec3 point_1;
  /// Its signed offset along e1 from the foot p_perp1.
  double p_par_1;
};

CommonNormalFoot common_normal_points(const Screw& xi1, const Screw& xi2, double tol = kRegularityTolerance);

/// Offset of the common-normal foot along axis 1, long form in raw screw
/// products.
double p_parallel_long(const Screw& xi1, const Screw& xi2, double tol = kRegularityTolerance);
/// Same offset via u11, u12, u22 and r3: (u11 b2.r3 - u12 b1.r3) / (u11 u22).
double p_parallel_reduced(const Screw& xi1, const Screw& xi2, double tol = kRegularityTolerance);
/// Same offset from the decomposition frame:
/// ((R^T B)_32 - (u12 / u11) (R^T B)_31) / u22.
double p_parallel_from_frame(const Mat3& rtb, double u11, double u12, double u22);

struct GeometryCheck {
  const char* name;
  bool passed;
  double residual;
  double tolerance;
};

struct GeometryReport {
  std::size_t index = 0;
  double progress = 0.0;
  bool applicable = false;
  std::array<GeometryCheck, 4> checks{};

  /// True for non-applicable windows.
  bool passed() const;
};

constexpr double kGeometryTolerance = 1e-10;

/// Checks an exact decomposition of a regular window against the axis
/// geometry: r1 along axis 1, r3 along the common normal, p on axis 1, and
/// p*_x equal to the common-normal offset. Regularized or irregular results
/// give a non-applicable report.
GeometryReport verify_su_geometry(const SuResult& result, const LocalWindow& w);

std::string to_string(const GeometryReport& report);

}  // namespace dutir

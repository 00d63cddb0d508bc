#include "dutir/geometry_oracle.hpp"

#include <cmath>
#include <sstream>

namespace dutir {

namespace {

void require_regular_pair(const Vec3& a1, const Vec3& a2, double tol) {
  const double scale = std::max({a1.norm(), a2.norm(), 1e-300});
  if (a1.norm() <= tol * scale || a1.cross(a2).norm() <= tol * scale * scale) {
    throw IrregularPairError("screw axes are undefined or parallel");
  }
}

}  // namespace

AlphaRelations alpha_relations(const Screw& xi1, const Screw& xi2, double tol) {
  const Vec3& a1 = xi1.alpha();
  const Vec3& a2 = xi2.alpha();
  require_regular_pair(a1, a2, tol);
  const Vec3 n = a1.cross(a2);
  AlphaRelations rel;
  rel.u11 = a1.norm();
  rel.u12 = a1.dot(a2) / rel.u11;
  rel.u22 = n.norm() / rel.u11;
  rel.r3 = n / n.norm();
  rel.theta = std::atan2(n.norm(), a1.dot(a2));
  return rel;
}

double quartic_identity_residual(const Screw& xi1, const Screw& xi2, const AlphaRelations& rel) {
  const double n1 = xi1.alpha().squaredNorm();
  const double n2 = xi2.alpha().squaredNorm();
  const double d = xi1.alpha().dot(xi2.alpha());
  const double lhs = n1 * n2 - d * d;
  const double rhs = rel.u11 * rel.u11 * rel.u22 * rel.u22;
  return std::abs(lhs - rhs) / (n1 * n2);
}

double p_parallel_long(const Screw& xi1, const Screw& xi2, double tol) {
  const Vec3& a1 = xi1.alpha();
  const Vec3& a2 = xi2.alpha();
  require_regular_pair(a1, a2, tol);
  const double n1 = a1.norm();
  const double d = a1.dot(a2);
  const double num = n1 * a1.dot(a2.cross(xi2.beta())) + (d / n1) * a2.dot(a1.cross(xi1.beta()));
  return num / (a1.squaredNorm() * a2.squaredNorm() - d * d);
}

double p_parallel_reduced(const Screw& xi1, const Screw& xi2, double tol) {
  const AlphaRelations rel = alpha_relations(xi1, xi2, tol);
  return (rel.u11 * xi2.beta().dot(rel.r3) - rel.u12 * xi1.beta().dot(rel.r3)) / (rel.u11 * rel.u22);
}

double p_parallel_from_frame(const Mat3& rtb, double u11, double u12, double u22) {
  return (rtb(2, 1) - (u12 / u11) * rtb(2, 0)) / u22;
}

CommonNormalFoot common_normal_points(const Screw& xi1, const Screw& xi2, double tol) {
  const double t = p_parallel_long(xi1, xi2, tol);
  const Vec3 e1 = xi1.alpha().normalized();
  const Vec3 perp1 = xi1.alpha().cross(xi1.beta()) / xi1.alpha().squaredNorm();
  return {perp1 + t * e1, t};
}

bool GeometryReport::passed() const {
  if (!applicable) return true;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

GeometryReport verify_su_geometry(const SuResult& result, const LocalWindow& w) {
  GeometryReport report;
  report.index = w.index;
  report.progress = w.progress;

  const Vec3& a1 = w.prev.alpha();
  const Vec3& a2 = w.curr.alpha();
  const double scale = std::max({a1.norm(), a2.norm(), 1e-300});
  const bool pair_regular =
      a1.norm() > kRegularityTolerance * scale && a1.cross(a2).norm() > kRegularityTolerance * scale * scale;
  if (!pair_regular || result.regularity != Regularity::Regular || result.u.regularized_p ||
      result.u.regularized_R) {
    return report;
  }
  report.applicable = true;

  const Mat3& r = result.s.rotation();
  const Vec3& p = result.s.position();
  auto check = [](const char* name, double residual, double tol) {
    return GeometryCheck{name, residual <= tol, residual, tol};
  };

  const Vec3 e1 = a1 / a1.norm();
  const double r1_res = (r.col(0) - e1).cwiseAbs().maxCoeff();

  const AlphaRelations rel = alpha_relations(w.prev, w.curr);
  const double r3_res = (r.col(2) - rel.r3).cwiseAbs().maxCoeff();

  const Vec3 perp1 = a1.cross(w.prev.beta()) / a1.squaredNorm();
  const double dist = (p - perp1).cross(e1).norm();

  const double p_par = p_parallel_long(w.prev, w.curr);
  const double par_res = std::abs(result.p_star.x() - p_par);

  report.checks = {
      check("r1_along_axis", r1_res, kGeometryTolerance),
      check("r3_along_common_normal", r3_res, kGeometryTolerance),
      check("p_on_axis", dist, kGeometryTolerance * std::max(1.0, p.norm())),
      check("p_star_x_is_normal_foot", par_res, kGeometryTolerance * std::max(1.0, std::abs(p_par))),
  };
  return report;
}

std::string to_string(const GeometryReport& report) {
  std::ostringstream os;
  os << "window " << report.index << " (x=" << report.progress << "): ";
  if (!report.applicable) {
    os << "not-applicable\n";
    return os.str();
  }
  os << (report.passed() ? "pass" : "FAIL") << '\n';
  for (const auto& c : report.checks) {
    os << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " residual=" << c.residual
       << " tol=" << c.tolerance << '\n';
  }
  return os.str();
}

}  // namespace dutir

#pragma once

// Test-only helpers: random generators and reference constructions that do
// not go through the code under test.

#include <Eigen/Geometry>
#include <cmath>
#include <random>
#include <vector>

#include "dutir/screw.hpp"
#include "dutir/su_decomposition.hpp"

namespace dutir::testing {

using Mat6 = Eigen::Matrix<double, 6, 6>;

/// The full 6x6 screw-transformation matrix [R 0; [p]x R  R].
inline Mat6 screw_matrix6(const ScrewTransform& s) {
  Mat6 m = Mat6::Zero();
  const Mat3& r = s.rotation();
  const Vec3& p = s.position();
  Mat3 px;
  px << 0, -p.z(), p.y(), p.z(), 0, -p.x(), -p.y(), p.x(), 0;
  m.topLeftCorner<3, 3>() = r;
  m.bottomLeftCorner<3, 3>() = px * r;
  m.bottomRightCorner<3, 3>() = r;
  return m;
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Vec3 vec3(double scale = 1.0) { return scale * Vec3(normal(), normal(), normal()); }
  Mat3 mat3() {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.data()[i] = normal();
    return m;
  }

  /// Uniform on SO(3): normalized Gaussian quaternion.
  Mat3 rotation() {
    Eigen::Quaterniond q(normal(), normal(), normal(), normal());
    return q.normalized().toRotationMatrix();
  }

  ScrewTransform transform(double translation_scale = 1.0) {
    return ScrewTransform(rotation(), vec3(translation_scale));
  }

  Screw screw(double alpha_scale = 1.0, double beta_scale = 1.0, ScrewKind kind = ScrewKind::Twist) {
    return Screw(vec3(alpha_scale), vec3(beta_scale), kind);
  }

  /// Window with well-separated alpha_prev, alpha_curr (sin angle >= 0.2).
  Mat63 regular_window() {
    while (true) {
      Mat63 xi;
      for (int i = 0; i < 18; ++i) xi.data()[i] = normal();
      const Vec3 a1 = xi.block<3, 1>(0, 0);
      const Vec3 a2 = xi.block<3, 1>(0, 1);
      if (a1.norm() < 0.2 || a2.norm() < 0.2) continue;
      if (a1.cross(a2).norm() < 0.2 * a1.norm() * a2.norm()) continue;
      return xi;
    }
  }

  /// Twice upper-triangular U with u11, u22 in [0.5, 2].
  Mat63 valid_u() {
    Mat63 u = Mat63::Zero();
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i <= j; ++i) {
        u(i, j) = normal();
        u(i + 3, j) = normal();
      }
    }
    u(0, 0) = uniform(0.5, 2.0);
    u(1, 1) = uniform(0.5, 2.0);
    return u;
  }

  /// Pure-translation window: every alpha column is zero.
  Mat63 alpha_zero_window() {
    Mat63 xi = Mat63::Zero();
    for (int j = 0; j < 3; ++j) xi.block<3, 1>(3, j) = vec3();
    return xi;
  }

  /// Window whose alpha columns share one direction (some may vanish).
  Mat63 alpha_parallel_window() {
    Mat63 xi = Mat63::Zero();
    const Vec3 d = vec3().normalized();
    xi.block<3, 1>(0, 0) = uniform(0.2, 2.0) * d;
    xi.block<3, 1>(0, 1) = uniform(-2.0, 2.0) * d;
    xi.block<3, 1>(0, 2) = uniform(-2.0, 2.0) * d;
    for (int j = 0; j < 3; ++j) xi.block<3, 1>(3, j) = vec3();
    return xi;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// n nearly uniform points on the sphere of radius r.
inline std::vector<Vec3> fibonacci_sphere(int n, double r) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    pts.emplace_back(r * rho * std::cos(phi), r * rho * std::sin(phi), r * z);
  }
  return pts;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace dutir::testing

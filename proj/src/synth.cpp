#include <cmath>
#include <numbers>
#include <random>

#include "dutir/error.hpp"
#include "dutir/trajectory.hpp"

namespace dutir {

namespace {

constexpr double kNominalDuration = 2.8;
constexpr double kSlideEnd = 0.7;
constexpr double kLiftEnd = 1.6;

double bell(double tau) {
  const double s = std::sin(std::numbers::pi * tau);
  return s * s;
}

// Screw of a rotation with angular velocity w about an axis through q plus a
// translation v.
Screw about_point(const Vec3& w, const Vec3& q, const Vec3& v) { return Screw(w, v - w.cross(q)); }

// Kettle-like demonstration on the nominal 2.8 s timeline: a slide along the
// table that barely rotates, a lift with a slight tilt, then a pour about a
// horizontal axis through the spout.
Screw slide_lift_pour_nominal(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (t <= kSlideEnd) {
    const double tau = t / kSlideEnd;
    return about_point(Vec3(0.0, 0.0, 0.04 * std::sin(two_pi * tau)), Vec3(0.3, 0.1, 0.05),
                       Vec3(0.6 * bell(tau), 0.02 * std::sin(two_pi * tau), 0.0));
  }
  if (t <= kLiftEnd) {
    const double tau = (t - kSlideEnd) / (kLiftEnd - kSlideEnd);
    return about_point(Vec3(0.0, 0.3 * bell(tau), 0.0), Vec3(0.55, 0.1, 0.15),
                       Vec3(0.05 * bell(tau), 0.0, 0.5 * bell(tau)));
  }
  const double tau = std::min(1.0, (t - kLiftEnd) / (kNominalDuration - kLiftEnd));
  return about_point(Vec3(0.2 * std::sin(two_pi * tau), 1.6 * bell(tau), 0.1 * bell(tau)),
                     Vec3(0.6, 0.1, 0.35), Vec3(0.0, 0.0, 0.05 * std::sin(two_pi * tau)));
}

void validate(const SynthSpec& spec) {
  if (spec.samples < 3) throw InvalidSpecError("at least three samples are required");
  if (!(spec.duration > 0.0) || !std::isfinite(spec.duration)) {
    throw InvalidSpecError("duration must be positive and finite");
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw InvalidSpecError("noise sigma must be non-negative and finite");
  }
  if (!spec.alpha.allFinite() || !spec.beta.allFinite()) {
    throw InvalidSpecError("screw parameters must be finite");
  }
}

// Twist -> rigid displacement over unit progress.
std::pair<Mat3, Vec3> exp_displacement(const Vec3& phi, const Vec3& rho) {
  const double theta = phi.norm();
  const Mat3 k = skew(phi);
  double a, b, c;
  if (theta < 1e-5) {
    a = 1.0 - theta * theta / 6.0;
    b = 0.5 - theta * theta / 24.0;
    c = 1.0 / 6.0 - theta * theta / 120.0;
  } else {
    a = std::sin(theta) / theta;
    const double s = std::sin(0.5 * theta);
    b = 2.0 * s * s / (theta * theta);
    c = (theta - std::sin(theta)) / (theta * theta * theta);
  }
  const Mat3 r = Mat3::Identity() + a * k + b * k * k;
  const Mat3 v = Mat3::Identity() + b * k + c * k * k;
  return {r, v * rho};
}

}  // namespace

SegmentBounds slide_lift_pour_segments(double duration) {
  const double s = duration / kNominalDuration;
  return {kSlideEnd * s, kLiftEnd * s, duration};
}

Trajectory synth_trajectory(const SynthSpec& spec) {
  validate(spec);
  const std::size_t n = spec.samples;
  const double h = spec.duration / static_cast<double>(n - 1);
  const double time_scale = kNominalDuration / spec.duration;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<double> x(n);
  std::vector<Screw> samples;
  samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = static_cast<double>(k) * h;
    Vec3 alpha, beta;
    switch (spec.archetype) {
      case Archetype::ConstantScrew:
        alpha = spec.alpha;
        beta = spec.beta;
        break;
      case Archetype::PureTranslation:
        alpha = Vec3::Zero();
        beta = spec.beta;
        break;
      case Archetype::PureRotation:
        alpha = spec.alpha;
        beta = Vec3::Zero();
        break;
      case Archetype::SlideLiftPour: {
        const Screw s = slide_lift_pour_nominal(x[k] * time_scale);
        alpha = s.alpha() * time_scale;
        beta = s.beta() * time_scale;
        break;
      }
    }
    if (spec.noise_sigma > 0.0) {
      for (int i = 0; i < 3; ++i) alpha[i] += spec.noise_sigma * noise(rng);
      for (int i = 0; i < 3; ++i) beta[i] += spec.noise_sigma * noise(rng);
    }
    samples.emplace_back(alpha, beta, spec.kind);
  }
  return Trajectory(std::move(x), std::move(samples), spec.kind);
}

PoseTrack synth_poses(const SynthSpec& spec, const PoseSample& start) {
  if (spec.kind != ScrewKind::Twist) throw InvalidSpecError("pose output requires a twist trajectory");
  const Trajectory traj = synth_trajectory(spec);
  const double h = spec.duration / static_cast<double>(spec.samples - 1);

  PoseTrack track;
  track.progress.reserve(traj.size() + 1);
  track.poses.reserve(traj.size() + 1);
  Mat3 r = start.orientation.toRotationMatrix();
  Vec3 p = start.position;
  track.progress.push_back(-0.5 * h);
  track.poses.push_back(start);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& xi = traj.samples()[k];
    const auto [rd, pd] = exp_displacement(xi.alpha() * h, xi.beta() * h);
    r = rd * r;
    p = rd * p + pd;
    track.progress.push_back((static_cast<double>(k) + 0.5) * h);
    track.poses.emplace_back(p, Eigen::Quaterniond(r));
  }
  return track;
}

double peak_component_magnitude(const Trajectory& traj) {
  double peak = 0.0;
  for (const auto& s : traj.samples()) {
    peak = std::max({peak, s.alpha().cwiseAbs().maxCoeff(), s.beta().cwiseAbs().maxCoeff()});
  }
  return peak;
}

}  // namespace dutir

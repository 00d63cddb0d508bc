#pragma once

#include <Eigen/Geometry>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dutir/screw.hpp"

namespace dutir {

/// Rigid pose of a body frame in the world frame. The quaternion is
/// normalized on construction.
struct PoseSample {
  PoseSample(const Vec3& position, const Eigen::Quaterniond& orientation);
  static PoseSample identity();

  Vec3 position;
  Eigen::Quaterniond orientation;
};

/// Discrete screw trajectory sampled at strictly increasing progress values.
class Trajectory {
 public:
  /// Throws NonMonotoneProgressError, KindMismatchError, or Error on a
  /// size mismatch.
  Trajectory(std::vector<double> progress, std::vector<Screw> samples, ScrewKind kind);

  std::size_t size() const noexcept { return samples_.size(); }
  ScrewKind kind() const noexcept { return kind_; }
  const std::vector<double>& progress() const noexcept { return progress_; }
  const std::vector<Screw>& samples() const noexcept { return samples_; }

 private:
  std::vector<double> progress_;
  std::vector<Screw> samples_;
  ScrewKind kind_;
};

/// Three consecutive screws centred on sample `index` (0-based).
struct LocalWindow {
  LocalWindow(const Screw& prev, const Screw& curr, const Screw& next,
              std::size_t index = 1, double progress = 0.0, double delta_x = 1.0);

  /// Window whose columns are the columns of xi.
  static LocalWindow from_matrix(const Mat63& xi, ScrewKind kind = ScrewKind::Twist);

  /// The 6x3 matrix [prev curr next].
  Mat63 matrix() const;
  Mat3 alpha_block() const;
  Mat3 beta_block() const;

  Screw prev;
  Screw curr;
  Screw next;
  std::size_t index;
  double progress;
  /// (x_{i+1} - x_{i-1}) / 2. Recorded only; the decomposition uses raw screws.
  double delta_x;
};

/// Rotation vector (axis * angle) of a rotation matrix.
Vec3 rotation_log(const Mat3& rotation);

/// Spatial twist carrying pose a to pose b over a progress step delta_x.
///
/// The displacement D = b * a^-1 is taken in the fixed world frame and its
/// six-dimensional logarithm divided by delta_x. Alpha is the angular
/// velocity and beta the velocity of the world-frame origin as carried by the
/// body, both in world coordinates.
Screw pose_log_twist(const PoseSample& a, const PoseSample& b, double delta_x);

/// N poses to N-1 twists anchored at the progress midpoints.
Trajectory twists_from_poses(const std::vector<double>& progress, const std::vector<PoseSample>& poses);

std::vector<LocalWindow> build_windows(const Trajectory& traj);

/// Applies a fixed world-frame change to every sample.
Trajectory transform_trajectory(const ScrewTransform& g, const Trajectory& traj);
PoseSample transform_pose(const ScrewTransform& g, const PoseSample& pose);

// File formats -------------------------------------------------------------

enum class InputFormat { PoseCsv, ScrewCsv };

inline constexpr const char* kPoseCsvHeader = "x,px,py,pz,qw,qx,qy,qz";
inline constexpr const char* kScrewCsvHeader = "x,a1,a2,a3,b1,b2,b3";

struct PoseTrack {
  std::vector<double> progress;
  std::vector<PoseSample> poses;
};

/// Shortest decimal form that reads back to the same double (17 significant
/// digits, printf %.17g).
std::string format_real(double value);

PoseTrack read_pose_csv(std::istream& in);
Trajectory read_screw_csv(std::istream& in, ScrewKind kind);
void write_pose_csv(std::ostream& out, const PoseTrack& track);
void write_screw_csv(std::ostream& out, const Trajectory& traj);

/// Loads a trajectory. Pose files yield twists via pose_log_twist; `kind`
/// applies to screw files only. Throws ParseError, NonMonotoneProgressError,
/// TooShortError (fewer than three samples), or Error if unreadable.
Trajectory load_trajectory(const std::filesystem::path& path, InputFormat format,
                           ScrewKind kind = ScrewKind::Twist);

// Synthetic fixtures -------------------------------------------------------

enum class Archetype { ConstantScrew, PureTranslation, PureRotation, SlideLiftPour };

struct SynthSpec {
  Archetype archetype = Archetype::SlideLiftPour;
  ScrewKind kind = ScrewKind::Twist;
  std::size_t samples = 281;
  double duration = 2.8;
  /// Screw for ConstantScrew; alpha alone for PureRotation, beta alone for
  /// PureTranslation.
  Vec3 alpha = Vec3(0.0, 0.0, 1.0);
  Vec3 beta = Vec3(0.2, 0.0, 0.1);
  /// Standard deviation of additive Gaussian noise on every screw component.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Progress span of each slide-lift-pour segment for a given duration.
struct SegmentBounds {
  double slide_end;
  double lift_end;
  double pour_end;
};
SegmentBounds slide_lift_pour_segments(double duration);

/// Samples at x_k = k * duration / (samples - 1). Throws InvalidSpecError.
Trajectory synth_trajectory(const SynthSpec& spec);

/// Poses whose pairwise twists reproduce synth_trajectory(spec) exactly: one
/// more pose than screws, at the cell edges around each screw sample,
/// starting from `start`. Twist specs only.
PoseTrack synth_poses(const SynthSpec& spec, const PoseSample& start = PoseSample::identity());

/// Largest absolute screw component over the trajectory.
double peak_component_magnitude(const Trajectory& traj);

}  // namespace dutir

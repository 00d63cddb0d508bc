#include "dutir/trajectory.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string_view>

#include "dutir/error.hpp"

namespace dutir {

PoseSample::PoseSample(const Vec3& p, const Eigen::Quaterniond& q) : position(p), orientation(q) {
  const double n = orientation.norm();
  if (!position.allFinite() || !std::isfinite(n) || n == 0.0) {
    throw NonFiniteError("pose must have a finite position and a non-zero quaternion");
  }
  orientation.coeffs() /= n;
}

PoseSample PoseSample::identity() { return PoseSample(Vec3::Zero(), Eigen::Quaterniond::Identity()); }

Trajectory::Trajectory(std::vector<double> progress, std::vector<Screw> samples, ScrewKind kind)
    : progress_(std::move(progress)), samples_(std::move(samples)), kind_(kind) {
  if (progress_.size() != samples_.size()) {
    throw Error("trajectory needs one progress value per sample");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].kind() != kind_) {
      throw KindMismatchError("sample " + std::to_string(i) + " is a " + to_string(samples_[i].kind()));
    }
    if (!std::isfinite(progress_[i])) throw NonFiniteError("progress values must be finite");
    if (i > 0 && !(progress_[i] > progress_[i - 1])) {
      throw NonMonotoneProgressError("progress must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
}

LocalWindow::LocalWindow(const Screw& p, const Screw& c, const Screw& n, std::size_t i, double x,
                         double dx)
    : prev(p), curr(c), next(n), index(i), progress(x), delta_x(dx) {
  if (p.kind() != c.kind() || c.kind() != n.kind()) {
    throw KindMismatchError("window screws must share one kind");
  }
}

LocalWindow LocalWindow::from_matrix(const Mat63& xi, ScrewKind kind) {
  auto col = [&](int j) { return Screw(xi.block<3, 1>(0, j), xi.block<3, 1>(3, j), kind); };
  return LocalWindow(col(0), col(1), col(2));
}

Mat63 LocalWindow::matrix() const {
  Mat63 m;
  m.col(0) = prev.coords();
  m.col(1) = curr.coords();
  m.col(2) = next.coords();
  return m;
}

Mat3 LocalWindow::alpha_block() const {
  Mat3 a;
  a << prev.alpha(), curr.alpha(), next.alpha();
  return a;
}

Mat3 LocalWindow::beta_block() const {
  Mat3 b;
  b << prev.beta(), curr.beta(), next.beta();
  return b;
}

Vec3 rotation_log(const Mat3& r) {
  const Vec3 w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double cos_t = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double sin_t = w.norm() / 2.0;
  const double theta = std::atan2(sin_t, cos_t);

  if (theta < 1e-5) {
    return 0.5 * (1.0 + theta * theta / 6.0) * w;
  }
  if (cos_t > -0.999) {
    return (theta / (2.0 * sin_t)) * w;
  }
  // Near pi the antisymmetric part loses the axis; read it off the symmetric
  // part (1 - cos) k k^T using its largest diagonal entry.
  const Mat3 sym = 0.5 * (r + r.transpose()) - cos_t * Mat3::Identity();
  Eigen::Index j = 0;
  sym.diagonal().maxCoeff(&j);
  Vec3 k = sym.col(j).normalized();
  if (k.dot(w) < 0.0) k = -k;
  return theta * k;
}

Screw pose_log_twist(const PoseSample& a, const PoseSample& b, double delta_x) {
  if (!(delta_x > 0.0)) throw NonPositiveStepError("progress step must be positive");

  const Mat3 ra = a.orientation.toRotationMatrix();
  const Mat3 rd = b.orientation.toRotationMatrix() * ra.transpose();
  const Vec3 pd = b.position - rd * a.position;

  const Vec3 phi = rotation_log(rd);
  const double theta = phi.norm();
  // (1 - (theta/2) cot(theta/2)) / theta^2, series below 1e-3.
  double c;
  if (theta < 1e-3) {
    const double t2 = theta * theta;
    c = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const double half = 0.5 * theta;
    c = (1.0 - half / std::tan(half)) / (theta * theta);
  }
  const Mat3 phi_x = skew(phi);
  const Mat3 v_inv = Mat3::Identity() - 0.5 * phi_x + c * phi_x * phi_x;
  return Screw(phi / delta_x, (v_inv * pd) / delta_x, ScrewKind::Twist);
}

Trajectory twists_from_poses(const std::vector<double>& progress, const std::vector<PoseSample>& poses) {
  if (progress.size() != poses.size()) throw Error("pose track needs one progress value per pose");
  for (std::size_t i = 1; i < progress.size(); ++i) {
    if (!(progress[i] > progress[i - 1])) {
      throw NonMonotoneProgressError("progress must be strictly increasing (row " + std::to_string(i) + ")");
    }
  }
  std::vector<double> mid;
  std::vector<Screw> twists;
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    mid.push_back(0.5 * (progress[i] + progress[i + 1]));
    twists.push_back(pose_log_twist(poses[i], poses[i + 1], progress[i + 1] - progress[i]));
  }
  return Trajectory(std::move(mid), std::move(twists), ScrewKind::Twist);
}

std::vector<LocalWindow> build_windows(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 3) throw TooShortError("at least three samples are needed to form a window");
  const auto& x = traj.progress();
  const auto& s = traj.samples();
  std::vector<LocalWindow> windows;
  windows.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    windows.emplace_back(s[i - 1], s[i], s[i + 1], i, x[i], 0.5 * (x[i + 1] - x[i - 1]));
  }
  return windows;
}

Trajectory transform_trajectory(const ScrewTransform& g, const Trajectory& traj) {
  std::vector<Screw> out;
  out.reserve(traj.size());
  for (const auto& xi : traj.samples()) out.push_back(transform_screw(g, xi));
  return Trajectory(traj.progress(), std::move(out), traj.kind());
}

PoseSample transform_pose(const ScrewTransform& g, const PoseSample& pose) {
  const Eigen::Quaterniond qg(g.rotation());
  return PoseSample(g.rotation() * pose.position + g.position(), qg * pose.orientation);
}

// ---------------------------------------------------------------------------

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Reads the data rows of a CSV file with a fixed header, skipping blank and
// '#' lines. Calls on_row(line_number, fields) for every row.
template <std::size_t Columns, typename OnRow>
void read_rows(std::istream& in, std::string_view header, OnRow&& on_row) {
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty() || view.front() == '#') continue;

    if (!seen_header) {
      std::string compact;
      for (char c : view) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != header) {
        throw ParseError(lineno, "expected header '" + std::string(header) + "'");
      }
      seen_header = true;
      continue;
    }

    std::array<double, Columns> fields{};
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      const auto token = trim(view.substr(start, comma == std::string_view::npos ? view.npos : comma - start));
      if (count == Columns) throw ParseError(lineno, "too many fields");
      double v = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
      if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
        throw ParseError(lineno, "invalid number '" + std::string(token) + "'");
      }
      fields[count++] = v;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != Columns) {
      throw ParseError(lineno, "expected " + std::to_string(Columns) + " fields, got " + std::to_string(count));
    }
    on_row(lineno, fields);
  }
  if (!seen_header) throw ParseError(lineno, "missing header");
}

}  // namespace

PoseTrack read_pose_csv(std::istream& in) {
  PoseTrack track;
  read_rows<8>(in, kPoseCsvHeader, [&](std::size_t lineno, const std::array<double, 8>& f) {
    const Eigen::Quaterniond q(f[4], f[5], f[6], f[7]);
    if (q.norm() < 1e-12) throw ParseError(lineno, "quaternion has zero norm");
    track.progress.push_back(f[0]);
    track.poses.emplace_back(Vec3(f[1], f[2], f[3]), q);
  });
  return track;
}

Trajectory read_screw_csv(std::istream& in, ScrewKind kind) {
  std::vector<double> x;
  std::vector<Screw> samples;
  read_rows<7>(in, kScrewCsvHeader, [&](std::size_t, const std::array<double, 7>& f) {
    x.push_back(f[0]);
    samples.emplace_back(Vec3(f[1], f[2], f[3]), Vec3(f[4], f[5], f[6]), kind);
  });
  return Trajectory(std::move(x), std::move(samples), kind);
}

void write_pose_csv(std::ostream& out, const PoseTrack& track) {
  out << kPoseCsvHeader << '\n';
  for (std::size_t i = 0; i < track.poses.size(); ++i) {
    const auto& p = track.poses[i];
    out << format_real(track.progress[i]) << ',' << format_real(p.position.x()) << ','
        << format_real(p.position.y()) << ',' << format_real(p.position.z()) << ','
        << format_real(p.orientation.w()) << ',' << format_real(p.orientation.x()) << ','
        << format_real(p.orientation.y()) << ',' << format_real(p.orientation.z()) << '\n';
  }
}

void write_screw_csv(std::ostream& out, const Trajectory& traj) {
  out << kScrewCsvHeader << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.samples()[i];
    out << format_real(traj.progress()[i]);
    for (int k = 0; k < 3; ++k) out << ',' << format_real(s.alpha()[k]);
    for (int k = 0; k < 3; ++k) out << ',' << format_real(s.beta()[k]);
    out << '\n';
  }
}

Trajectory load_trajectory(const std::filesystem::path& path, InputFormat format, ScrewKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");

  Trajectory traj = [&] {
    if (format == InputFormat::PoseCsv) {
      const PoseTrack track = read_pose_csv(in);
      return twists_from_poses(track.progress, track.poses);
    }
    return read_screw_csv(in, kind);
  }();
  if (traj.size() < 3) {
    throw TooShortError("trajectory has " + std::to_string(traj.size()) + " samples, at least 3 are needed");
  }
  return traj;
}

}  // namespace dutir

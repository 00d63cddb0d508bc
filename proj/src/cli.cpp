#include "dutir/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "dutir/geometry_oracle.hpp"

namespace dutir::cli {

RegularizationConfig RunConfig::regularization_config() const {
  RegularizationConfig rc{L, w.value_or(L), regularization};
  if (regularization) rc.validate();
  return rc;
}

std::vector<std::string> decompose_columns(bool emit_s) {
  std::vector<std::string> cols{"x",   "u11", "u12", "u13", "u22", "u23", "u33", "u41",   "u42",  "u43",
                                "e51", "u52", "u53", "e61", "e62", "u63", "reg_p", "reg_R", "status"};
  if (emit_s) {
    for (const char* c : {"r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33", "px", "py", "pz"}) {
      cols.emplace_back(c);
    }
  }
  return cols;
}

Trajectory load_input(const RunConfig& cfg) {
  switch (cfg.format) {
    case FileFormat::Pose:
      return load_trajectory(cfg.input, InputFormat::PoseCsv);
    case FileFormat::Twist:
      return load_trajectory(cfg.input, InputFormat::ScrewCsv, ScrewKind::Twist);
    case FileFormat::Wrench:
      return load_trajectory(cfg.input, InputFormat::ScrewCsv, ScrewKind::Wrench);
  }
  throw Error("unknown input format");
}

namespace {

// Applies fn to every item on a few worker threads; results keep input order.
template <typename T, typename Fn>
auto ordered_parallel_map(const std::vector<T>& items, Fn fn) {
  using R = decltype(fn(items.front()));
  std::vector<std::optional<R>> slots(items.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(items.size() / 64, 1));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < items.size(); i += workers) slots[i].emplace(fn(items[i]));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

void write_row(std::ostream& os, const LocalWindow& w, const std::optional<SuResult>& res, bool emit_s) {
  constexpr int kEntries[][2] = {{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}, {4, 1}, {4, 2},
                                 {4, 3}, {5, 1}, {5, 2}, {5, 3}, {6, 1}, {6, 2}, {6, 3}};
  os << format_real(w.progress);
  if (!res) {
    for (std::size_t i = 0; i < std::size(kEntries); ++i) os << ",nan";
    os << ",0,0,irregular";
    if (emit_s) {
      for (int i = 0; i < 12; ++i) os << ",nan";
    }
    os << '\n';
    return;
  }
  for (const auto& e : kEntries) os << ',' << format_real(res->u.at(e[0], e[1]));
  os << ',' << int(res->u.regularized_p) << ',' << int(res->u.regularized_R) << ',' << to_string(res->regularity);
  if (emit_s) {
    const Mat3& r = res->s.rotation();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) os << ',' << format_real(r(i, j));
    }
    for (int i = 0; i < 3; ++i) os << ',' << format_real(res->s.position()[i]);
  }
  os << '\n';
}

// Runs body with the requested output stream, reporting library errors as
// input errors.
template <typename Body>
int with_output(const std::optional<std::filesystem::path>& path, std::ostream& out, std::ostream& err,
                Body&& body) {
  try {
    if (!path) return body(out);
    std::ostringstream buffer;
    const int code = body(buffer);
    std::ofstream file(*path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << path->string() << "'\n";
      return kExitInputError;
    }
    file << buffer.str();
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return with_output(cfg.output, out, err, [&](std::ostream& os) {
    const RegularizationConfig reg = cfg.regularization_config();
    const Trajectory traj = load_input(cfg);
    const auto windows = build_windows(traj);

    const auto results = ordered_parallel_map(windows, [&](const LocalWindow& w) -> std::optional<SuResult> {
      if (reg.enabled) return su_decompose_regularized(w, reg);
      try {
        return su_decompose(w);
      } catch (const IrregularWindowError&) {
        return std::nullopt;
      }
    });

    const auto cols = decompose_columns(cfg.emit_s);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (std::size_t i = 0; i < windows.size(); ++i) write_row(os, windows[i], results[i], cfg.emit_s);
    return kExitOk;
  });
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return with_output(cfg.output, out, err, [&](std::ostream& os) {
    const Trajectory traj = load_input(cfg);
    const auto windows = build_windows(traj);

    const auto reports = ordered_parallel_map(windows, [](const LocalWindow& w) {
      if (check_regularity(w) != Regularity::Regular) {
        GeometryReport r;
        r.index = w.index;
        r.progress = w.progress;
        return r;
      }
      return verify_su_geometry(su_decompose(w), w);
    });

    std::size_t passed = 0, failed = 0, skipped = 0;
    for (const auto& r : reports) {
      os << to_string(r);
      if (!r.applicable) {
        ++skipped;
      } else if (r.passed()) {
        ++passed;
      } else {
        ++failed;
      }
    }
    os << "summary: " << reports.size() << " windows, " << passed << " passed, " << failed << " failed, "
       << skipped << " not-applicable\n";
    return failed == 0 ? kExitOk : kExitVerificationFailed;
  });
}

int cmd_synth(const SynthConfig& cfg, std::ostream& out, std::ostream& err) {
  return with_output(cfg.output, out, err, [&](std::ostream& os) {
    SynthSpec spec = cfg.spec;
    spec.kind = cfg.format == FileFormat::Wrench ? ScrewKind::Wrench : ScrewKind::Twist;
    if (cfg.format == FileFormat::Pose) {
      PoseTrack track = synth_poses(spec);
      if (cfg.frame) {
        for (auto& p : track.poses) p = transform_pose(*cfg.frame, p);
      }
      write_pose_csv(os, track);
    } else {
      Trajectory traj = synth_trajectory(spec);
      if (cfg.frame) traj = transform_trajectory(*cfg.frame, traj);
      write_screw_csv(os, traj);
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidConfigError(std::string("invalid number in ") + what + ": '" + item + "'");
    }
  }
  if (values.size() != expected) {
    throw InvalidConfigError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated values");
  }
  return values;
}

const std::map<std::string, FileFormat> kFormats{
    {"pose", FileFormat::Pose}, {"twist", FileFormat::Twist}, {"wrench", FileFormat::Wrench}};

const std::map<std::string, Archetype> kArchetypes{{"constant", Archetype::ConstantScrew},
                                                   {"translation", Archetype::PureTranslation},
                                                   {"rotation", Archetype::PureRotation},
                                                   {"slide-lift-pour", Archetype::SlideLiftPour}};

void add_run_options(CLI::App* cmd, RunConfig& cfg, std::string& w_text) {
  cmd->add_option("--input", cfg.input, "Trajectory file")->required();
  cmd->add_option("--format", cfg.format, "Input format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_str("pose");
  cmd->add_option("--output", cfg.output, "Output file (default: stdout)");
  cmd->add_option("--L", cfg.L, "Geometric scale L in metres")->default_val(1.0);
  cmd->add_option("--w", w_text, "Procrustes weight w in metres (default: L)");
  cmd->add_flag("--no-regularization{false}", cfg.regularization, "Use the exact decomposition only");
  cmd->add_flag("--emit-S", cfg.emit_s, "Append rotation and position columns");
  cmd->add_option("--seed", cfg.seed, "Unused; accepted for symmetry with synth");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coordinate-invariant decomposition of screw trajectories"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  std::string w_text;
  auto* decompose = app.add_subcommand("decompose", "Write U entries for every window as CSV");
  add_run_options(decompose, run_cfg, w_text);
  auto* check = app.add_subcommand("check", "Verify the axis geometry of every regular window");
  add_run_options(check, run_cfg, w_text);

  SynthConfig synth_cfg;
  std::string archetype = "slide-lift-pour";
  std::string frame_text, alpha_text, beta_text;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic trajectory fixture");
  synth->add_option("--archetype", archetype, "constant | translation | rotation | slide-lift-pour")
      ->default_val(archetype);
  synth->add_option("--format", synth_cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_str("pose");
  synth->add_option("--output", synth_cfg.output, "Output file (default: stdout)");
  synth->add_option("--samples", synth_cfg.spec.samples, "Number of screw samples")->default_val(281);
  synth->add_option("--duration", synth_cfg.spec.duration, "Progress span")->default_val(2.8);
  synth->add_option("--noise", synth_cfg.spec.noise_sigma, "Gaussian noise sigma on screw components")
      ->default_val(0.0);
  synth->add_option("--seed", synth_cfg.spec.seed, "Noise seed")->default_val(0);
  synth->add_option("--alpha", alpha_text, "a1,a2,a3 for constant/rotation archetypes");
  synth->add_option("--beta", beta_text, "b1,b2,b3 for constant/translation archetypes");
  synth->add_option("--frame", frame_text, "px,py,pz,qw,qx,qy,qz world-frame change");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (!w_text.empty()) run_cfg.w = parse_list(w_text, 1, "--w").front();
    if (*decompose) return cmd_decompose(run_cfg, out, err);
    if (*check) return cmd_check(run_cfg, out, err);

    const auto it = kArchetypes.find(archetype);
    if (it == kArchetypes.end()) throw InvalidConfigError("unknown archetype '" + archetype + "'");
    synth_cfg.spec.archetype = it->second;
    if (!alpha_text.empty()) {
      const auto v = parse_list(alpha_text, 3, "--alpha");
      synth_cfg.spec.alpha = Vec3(v[0], v[1], v[2]);
    }
    if (!beta_text.empty()) {
      const auto v = parse_list(beta_text, 3, "--beta");
      synth_cfg.spec.beta = Vec3(v[0], v[1], v[2]);
    }
    if (!frame_text.empty()) {
      const auto v = parse_list(frame_text, 7, "--frame");
      const PoseSample pose(Vec3(v[0], v[1], v[2]), Eigen::Quaterniond(v[3], v[4], v[5], v[6]));
      synth_cfg.frame = ScrewTransform(pose.orientation.toRotationMatrix(), pose.position);
    }
    return cmd_synth(synth_cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace dutir::cli

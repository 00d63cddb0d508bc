#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dutir/regularization.hpp"
#include "dutir/trajectory.hpp"

namespace dutir::cli {

enum class FileFormat { Pose, Twist, Wrench };

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerificationFailed = 2;

struct RunConfig {
  std::filesystem::path input;
  FileFormat format = FileFormat::Pose;
  std::optional<std::filesystem::path> output;
  double L = 1.0;
  /// Defaults to L.
  std::optional<double> w;
  bool regularization = true;
  bool emit_s = false;
  std::uint64_t seed = 0;

  RegularizationConfig regularization_config() const;
};

struct SynthConfig {
  SynthSpec spec;
  FileFormat format = FileFormat::Pose;
  std::optional<std::filesystem::path> output;
  /// World-frame change applied to the generated fixture.
  std::optional<ScrewTransform> frame;
};

/// Header of the decompose output, optionally with the S columns appended.
std::vector<std::string> decompose_columns(bool emit_s);

Trajectory load_input(const RunConfig& cfg);

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dutir::cli

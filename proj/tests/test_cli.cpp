#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "dutir/cli.hpp"

namespace fs = std::filesystem;
using namespace dutir;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"dutir"};
  owned.insert(owned.end(), args);
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("dutir_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

using Table = std::vector<std::vector<std::string>>;

Table parse_csv(const std::string& text) {
  Table rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// Largest difference over the U and epsilon columns (1..15), relative to max(1, |a|).
double max_u_difference(const Table& a, const Table& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t r = 1; r < a.size(); ++r) {
    for (std::size_t c = 1; c <= 15; ++c) {
      const double x = std::stod(a[r][c]), y = std::stod(b[r][c]);
      if (std::isnan(x) && std::isnan(y)) continue;
      worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(x)));
    }
  }
  return worst;
}

constexpr const char* kHeader = "x,u11,u12,u13,u22,u23,u33,u41,u42,u43,e51,u52,u53,e61,e62,u63,reg_p,reg_R,status";

}  // namespace

TEST_CASE("decompose writes the documented columns") {
  CHECK(cli::decompose_columns(false).size() == 19);
  CHECK(cli::decompose_columns(true).size() == 31);
  CHECK(cli::decompose_columns(true)[19] == "r11");
  CHECK(cli::decompose_columns(true).back() == "pz");

  TempDir dir;
  REQUIRE(run_cli({"synth", "--archetype", "rotation", "--format", "twist", "--samples", "12", "--output",
                   (dir / "in.csv").string()})
              .code == 0);
  const Outcome plain = run_cli({"decompose", "--input", (dir / "in.csv").string(), "--format", "twist"});
  CHECK(plain.code == 0);
  const Table rows = parse_csv(plain.out);
  CHECK(plain.out.substr(0, plain.out.find('\n')) == kHeader);
  CHECK(rows.size() == 11);
  for (const auto& r : rows) CHECK(r.size() == 19);

  const Outcome with_s = run_cli({"decompose", "--input", (dir / "in.csv").string(), "--format", "twist", "--emit-S"});
  for (const auto& r : parse_csv(with_s.out)) CHECK(r.size() == 31);
}

TEST_CASE("constant screw gives identical rows") {
  TempDir dir;
  REQUIRE(run_cli({"synth", "--archetype", "constant", "--alpha", "0.1,0.4,1.0", "--beta", "0.2,0,0.1",
                   "--samples", "50", "--output", (dir / "c.csv").string()})
              .code == 0);
  for (const char* reg : {"--L=1", "--no-regularization"}) {
    const Outcome res = run_cli({"decompose", "--input", (dir / "c.csv").string(), reg});
    REQUIRE(res.code == 0);
    const Table rows = parse_csv(res.out);
    REQUIRE(rows.size() > 3);
    for (std::size_t r = 2; r < rows.size(); ++r) {
      for (std::size_t c = 1; c <= 15; ++c) {
        const double a = std::stod(rows[1][c]), b = std::stod(rows[r][c]);
        if (std::isnan(a) && std::isnan(b)) continue;
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST_CASE("three screws give one row") {
  TempDir dir;
  std::ofstream(dir / "three.csv") << "x,a1,a2,a3,b1,b2,b3\n"
                                      "0,1,0,0,0,0,0\n"
                                      "0.1,0,1,0,0,0,0.5\n"
                                      "0.2,0,0,1,0.1,0,0\n";
  const Outcome res = run_cli({"decompose", "--input", (dir / "three.csv").string(), "--format", "twist"});
  CHECK(res.code == 0);
  const Table rows = parse_csv(res.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "0.10000000000000001");
  CHECK(rows[1].back() == "regular");
}

TEST_CASE("exact path leaves epsilon at zero and flags irregular windows") {
  TempDir dir;
  REQUIRE(run_cli({"synth", "--archetype", "slide-lift-pour", "--noise", "0.01", "--seed", "3", "--output",
                   (dir / "p.csv").string()})
              .code == 0);
  const Outcome res = run_cli({"decompose", "--input", (dir / "p.csv").string(), "--no-regularization"});
  REQUIRE(res.code == 0);
  const Table rows = parse_csv(res.out);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r][10] == "0");
    CHECK(rows[r][13] == "0");
    CHECK(rows[r][14] == "0");
    CHECK(rows[r][16] == "0");
    CHECK(rows[r][17] == "0");
  }

  REQUIRE(run_cli({"synth", "--archetype", "translation", "--beta", "0.3,0,0", "--samples", "10", "--output",
                   (dir / "t.csv").string()})
              .code == 0);
  const Outcome irr = run_cli({"decompose", "--input", (dir / "t.csv").string(), "--no-regularization"});
  CHECK(irr.code == 0);
  const Table irr_rows = parse_csv(irr.out);
  REQUIRE(irr_rows.size() == 9);
  for (std::size_t r = 1; r < irr_rows.size(); ++r) {
    CHECK(irr_rows[r].back() == "irregular");
    CHECK(irr_rows[r][1] == "nan");
  }

  const Outcome reg = run_cli({"decompose", "--input", (dir / "t.csv").string(), "--L", "0.3"});
  const Table reg_rows = parse_csv(reg.out);
  for (std::size_t r = 1; r < reg_rows.size(); ++r) {
    CHECK(reg_rows[r].back() == "alpha_zero");
    CHECK(std::stod(reg_rows[r][7]) == doctest::Approx(0.3).epsilon(1e-9));
  }
}

TEST_CASE("the same motion in two frames gives the same U") {
  TempDir dir;
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string(), c = (dir / "c.csv").string();
  REQUIRE(run_cli({"synth", "--noise", "0.016", "--seed", "11", "--output", a}).code == 0);
  REQUIRE(run_cli({"synth", "--noise", "0.016", "--seed", "11", "--frame", "0.5,-1.2,2.0,0.8,0.2,-0.4,0.4",
                   "--output", b})
              .code == 0);
  REQUIRE(run_cli({"synth", "--noise", "0.016", "--seed", "11", "--frame", "0,0,0,0.3,-0.5,0.1,0.8", "--output", c})
              .code == 0);
  CHECK(slurp(a) != slurp(b));

  const auto exact = [](const std::string& in) {
    return parse_csv(run_cli({"decompose", "--input", in, "--no-regularization"}).out);
  };
  CHECK(max_u_difference(exact(a), exact(b)) < 1e-9);

  // Regularization is anchored at the origin, so only rotations leave it unchanged.
  const auto regularized = [](const std::string& in) {
    return parse_csv(run_cli({"decompose", "--input", in, "--L", "0.3"}).out);
  };
  CHECK(max_u_difference(regularized(a), regularized(c)) < 1e-9);
}

TEST_CASE("check exit codes") {
  TempDir dir;
  const std::string rot = (dir / "rot.csv").string();
  REQUIRE(run_cli({"synth", "--noise", "0.05", "--seed", "5", "--archetype", "constant", "--alpha", "0.3,0.2,1.0",
                   "--beta", "0.1,0.2,0.3", "--output", rot})
              .code == 0);
  const Outcome ok = run_cli({"check", "--input", rot});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("summary:") != std::string::npos);
  CHECK(ok.out.find("0 failed") != std::string::npos);

  const std::string tr = (dir / "tr.csv").string();
  REQUIRE(run_cli({"synth", "--archetype", "translation", "--output", tr}).code == 0);
  const Outcome skipped = run_cli({"check", "--input", tr, "--no-regularization"});
  CHECK(skipped.code == 0);
  CHECK(skipped.out.find("not-applicable") != std::string::npos);
  CHECK(skipped.out.find("0 passed") != std::string::npos);

  std::ofstream(dir / "bad.csv") << "x,px,py,pz,qw,qx,qy,qz\n0,0,0,0,1,0,0,0\n0.1,0,zero,0,1,0,0,0\n";
  const Outcome bad = run_cli({"check", "--input", (dir / "bad.csv").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 3") != std::string::npos);

  CHECK(run_cli({"check", "--input", (dir / "missing.csv").string()}).code == 1);
}

TEST_CASE("input and config errors exit with 1") {
  TempDir dir;
  const std::string in = (dir / "in.csv").string();
  REQUIRE(run_cli({"synth", "--samples", "10", "--output", in}).code == 0);
  CHECK(run_cli({"decompose", "--input", in, "--L", "0"}).code == 1);
  CHECK(run_cli({"decompose", "--input", in, "--L", "-1"}).code == 1);
  CHECK(run_cli({"decompose", "--input", in, "--w", "0"}).code == 1);
  CHECK(run_cli({"decompose", "--input", in, "--w", "abc"}).code == 1);
  CHECK(run_cli({"decompose", "--input", in, "--format", "quaternion"}).code == 1);
  CHECK(run_cli({"decompose"}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  // Pose header given to the screw reader.
  CHECK(run_cli({"decompose", "--input", in, "--format", "twist"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("synth") {
  TempDir dir;
  const Outcome first = run_cli({"synth", "--noise", "0.02", "--seed", "42"});
  const Outcome second = run_cli({"synth", "--noise", "0.02", "--seed", "42"});
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  CHECK(first.out != run_cli({"synth", "--noise", "0.02", "--seed", "43"}).out);

  CHECK(run_cli({"synth", "--duration", "0"}).code == 1);
  CHECK(run_cli({"synth", "--samples", "2"}).code == 1);
  CHECK(run_cli({"synth", "--noise", "-1"}).code == 1);
  CHECK(run_cli({"synth", "--format", "wrench", "--archetype", "constant"}).code == 0);
  CHECK(run_cli({"synth", "--alpha", "1,2"}).code == 1);
  CHECK(run_cli({"synth", "--frame", "0,0,0,0,0,0,0"}).code == 1);

  const Outcome twist = run_cli({"synth", "--format", "twist", "--samples", "5"});
  CHECK(twist.out.substr(0, twist.out.find('\n')) == "x,a1,a2,a3,b1,b2,b3");
  CHECK(parse_csv(twist.out).size() == 6);

  const std::string file = (dir / "s.csv").string();
  CHECK(run_cli({"synth", "--noise", "0.02", "--seed", "42", "--output", file}).code == 0);
  CHECK(slurp(file) == first.out);
}

TEST_CASE("golden fixture") {
  const fs::path data(DUTIR_TEST_DATA);
  TempDir dir;
  const std::string poses = (dir / "poses.csv").string(), out = (dir / "out.csv").string();
  REQUIRE(run_cli({"synth", "--samples", "41", "--duration", "2.8", "--noise", "0.016", "--seed", "7", "--output",
                   poses})
              .code == 0);
  CHECK(slurp(poses) == slurp(data / "golden_poses.csv"));
  REQUIRE(run_cli({"decompose", "--input", (data / "golden_poses.csv").string(), "--L", "0.3", "--emit-S",
                   "--output", out})
              .code == 0);
  CHECK(slurp(out) == slurp(data / "golden_decompose.csv"));
}

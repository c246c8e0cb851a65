#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "lie_iekf/harness.hpp"

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(LIE_IEKF_CLI) + " " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out.output += buf.data();
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lie_iekf_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, RequiresSubcommand) { EXPECT_NE(run_cli("").code, 0); }

TEST(Cli, MissingConfigFile) {
  const Outcome r = run_cli("compare --config /nonexistent/cfg.json --runs 1");
  EXPECT_NE(r.code, 0);
}

TEST(Cli, ZeroStepNamesField) {
  const Outcome r = run_cli("compare --dt 0 --runs 1 --out " + scratch("dt0").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("dt"), std::string::npos) << r.output;
}

TEST(Cli, UnknownFilterRejected) {
  const Outcome r = run_cli("compare --filter ukf --runs 1 --out " + scratch("ukf").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("filter"), std::string::npos) << r.output;
}

TEST(Cli, ConfigFileWithOverrides) {
  const auto dir = scratch("config");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"horizon": 1.0, "runs": 2, "filter": "iekf"})";
  const Outcome r = run_cli("compare --config " + (dir / "cfg.json").string() + " --runs 3 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const lie_iekf::MseTable table = lie_iekf::read_mse_csv((dir / "mse.csv").string());
  EXPECT_EQ(table.time.size(), 50u);
  EXPECT_TRUE(std::isnan(table.ext_mse.front()));
  EXPECT_NE(slurp(dir / "summary.json").find("\"runs\": 3"), std::string::npos);
}

TEST(Cli, CompareIsDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  ASSERT_EQ(run_cli("compare --runs 4 --seed 7 --horizon 1 --out " + a.string()).code, 0);
  ASSERT_EQ(run_cli("compare --runs 4 --seed 7 --horizon 1 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "mse.csv"), slurp(b / "mse.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Cli, BenchWritesTiming) {
  const auto dir = scratch("bench");
  const Outcome r = run_cli("bench --runs 2 --horizon 0.5 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string text = slurp(dir / "timing.csv");
  EXPECT_EQ(text.rfind("Filter,ComTime\nIEKF,", 0), 0u) << text;
  EXPECT_NE(text.find("\nEKF,"), std::string::npos);
}

TEST(Cli, SimulateWritesTrajectories) {
  const auto dir = scratch("simulate");
  const Outcome r = run_cli("simulate --run 2 --horizon 0.2 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* name : {"trajectory_iekf.csv", "trajectory_ekf.csv"}) {
    const std::string text = slurp(dir / name);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12) << name;
  }
}

TEST(Cli, SelftestReportsEveryCheck) {
  const Outcome r = run_cli("selftest");
  EXPECT_NE(r.output.find("IEKF left invariance"), std::string::npos);
  EXPECT_NE(r.output.find("zero-noise tracking (IEKF)"), std::string::npos);
}

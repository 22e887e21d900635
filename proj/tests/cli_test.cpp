#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "cfsim/battery.hpp"
#include "cfsim/cli.hpp"
#include "cfsim/scenario.hpp"

namespace cfsim {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cfsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

const char* kHover = "format_version = 1\nduration = 20\n\n[drone cf1]\nposition = 0 0 1\n";

TEST_F(CliTest, RunHoverWritesConstantPose) {
  spit(dir_ / "hover.scn", kHover);
  const auto r = cli({"run", (dir_ / "hover.scn").string(), "--out", (dir_ / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("id=cf1 rows=21 peak_speed=0.000000"), std::string::npos) << r.out;
  const std::string csv = slurp(dir_ / "out" / "cf1.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",cf1,0.000000,0.000000,1.000000,0.000000,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 21);
}

TEST_F(CliTest, TicksOverride) {
  spit(dir_ / "hover.scn", kHover);
  const auto r = cli({"run", (dir_ / "hover.scn").string(), "--ticks", "3", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rows=4 "), std::string::npos);
}

TEST_F(CliTest, CorruptScenarioExitsTwoWithLine) {
  spit(dir_ / "bad.scn", "format_version = 1\n[drone cf1]\nposition = 0 zero 1\n");
  const auto r = cli({"run", (dir_ / "bad.scn").string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingScenarioExitsTwo) {
  EXPECT_EQ(cli({"run", (dir_ / "nope.scn").string()}).code, 2);
}

TEST_F(CliTest, InvalidScenarioExitsTwo) {
  spit(dir_ / "bad.scn", "format_version = 1\n[drone cf1]\nposition = 9 0 1\n");
  const auto r = cli({"run", (dir_ / "bad.scn").string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("drone.cf1.position"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"fly"}).code, 1);
  EXPECT_EQ(cli({"run"}).code, 1);
  EXPECT_EQ(cli({"metrics", "mse", "a", "b"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, UnknownExperimentListsNames) {
  const auto r = cli({"experiment", "barrel-roll"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("camera-calibration"), std::string::npos);
  EXPECT_NE(r.err.find("position-legs"), std::string::npos);
}

TEST_F(CliTest, BadExperimentValueIsUsage) {
  EXPECT_EQ(cli({"experiment", "line2d", "--speed", "-2", "--out-dir", dir_.string()}).code, 1);
  EXPECT_EQ(cli({"experiment", "line2d", "--emit-scenario"}).code, 1);
}

TEST_F(CliTest, BatteryExperimentDepletesAtTMax) {
  const auto r = cli({"experiment", "battery", "--initial-charge", "1.0", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("time_to_zero_s=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(r.out.substr(pos + 15)), 427.21, 0.1);
  EXPECT_TRUE(fs::exists(dir_ / "battery_1.00_cf1.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "battery_1.00.time-charge.dat"));
}

TEST_F(CliTest, CameraCalibrationPixels) {
  const auto r = cli({"experiment", "camera-calibration", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("source=red u=0 v=160"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("source=green u=160 v=0"), std::string::npos);
  EXPECT_NE(r.out.find("source=blue u=319 v=160"), std::string::npos);
  EXPECT_NE(r.out.find("source=white u=160 v=319"), std::string::npos);
  EXPECT_NE(r.out.find("detections=4"), std::string::npos);
}

TEST_F(CliTest, PositionLegsReportSixLegs) {
  const auto r = cli({"experiment", "position-legs", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int legs = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("leg=", 0) != 0) {
      continue;
    }
    ++legs;
    const double desired = std::stod(line.substr(line.find("desired_m=") + 10));
    const double error = std::stod(line.substr(line.find("error_m=") + 8));
    EXPECT_LT(error, 0.01 * desired) << line;
  }
  EXPECT_EQ(legs, 6);
}

TEST_F(CliTest, EmittedScenarioReplaysExperiment) {
  const auto exp = cli({"experiment", "line2d", "--speed", "0.5", "--out-dir", (dir_ / "exp").string()});
  ASSERT_EQ(exp.code, 0) << exp.err;
  const auto emitted = cli({"experiment", "line2d", "--speed", "0.5", "--emit-scenario"});
  ASSERT_EQ(emitted.code, 0) << emitted.err;
  spit(dir_ / "line2d.scn", emitted.out);
  const auto replay = cli({"run", (dir_ / "line2d.scn").string(), "--out", (dir_ / "run").string()});
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(slurp(dir_ / "exp" / "line2d_0.50_cf1.csv"), slurp(dir_ / "run" / "cf1.csv"));
}

TEST_F(CliTest, MetricsMse) {
  spit(dir_ / "a.csv", "x\n1\n2\n3\n");
  spit(dir_ / "b.csv", "x\n1\n2\n4\n");
  auto r = cli({"metrics", "mse", (dir_ / "a.csv").string(), (dir_ / "b.csv").string(), "--column", "x"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "mse=0.333333\n");
  r = cli({"metrics", "mse", (dir_ / "a.csv").string(), (dir_ / "a.csv").string(), "--column", "x"});
  EXPECT_EQ(r.out, "mse=0.000000\n");
  r = cli({"metrics", "mse", (dir_ / "a.csv").string(), (dir_ / "b.csv").string(), "--column", "y"});
  EXPECT_EQ(r.code, 2);
  spit(dir_ / "c.csv", "x\n1\n");
  r = cli({"metrics", "mse", (dir_ / "a.csv").string(), (dir_ / "c.csv").string(), "--column", "x"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, MetricsOnIdenticalBatteryRuns) {
  ASSERT_EQ(cli({"experiment", "battery", "--initial-charge", "0.5", "--out-dir", (dir_ / "a").string()}).code, 0);
  ASSERT_EQ(cli({"experiment", "battery", "--initial-charge", "0.5", "--out-dir", (dir_ / "b").string()}).code, 0);
  const auto r = cli({"metrics", "mse", (dir_ / "a" / "battery_0.50_cf1.csv").string(),
                      (dir_ / "b" / "battery_0.50_cf1.csv").string(), "--column", "charge"});
  EXPECT_EQ(r.out, "mse=0.000000\n");
  const auto p = cli({"metrics", "mse", (dir_ / "a" / "battery_0.50_cf1.csv").string(),
                      (dir_ / "b" / "battery_0.50_cf1.csv").string(), "--column", "position"});
  EXPECT_EQ(p.out, "mse=0.000000\n");
}

std::string samples_csv(const std::array<double, 4>& c, double tMax, int n, double sigma) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, sigma > 0 ? sigma : 1.0);
  std::string text = "time_s,charge\n";
  for (int i = 0; i < n; ++i) {
    const double t = tMax * i / (n - 1);
    const double p = c[0] + t * (c[1] + t * (c[2] + t * c[3]));
    text += format_double(t) + "," + format_double(p + (sigma > 0 ? noise(rng) : 0.0)) + "\n";
  }
  return text;
}

TEST_F(CliTest, FitBatteryRecoversDefaultModel) {
  const auto& c = BatteryModel::kDefaultCoefficients;
  spit(dir_ / "s.csv", samples_csv(c, 427.21, 300, 0.0));
  const auto r = cli({"fit-battery", (dir_ / "s.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int k = 0; k < 4; ++k) {
    const auto key = "c" + std::to_string(k) + "=";
    const double got = std::stod(r.out.substr(r.out.find(key) + key.size()));
    EXPECT_NEAR(got, c[k], 1e-9 * std::abs(c[k])) << key;
  }
  EXPECT_NE(r.out.find("t_max=427.210000"), std::string::npos);
  const double m = std::stod(r.out.substr(r.out.find("mse=") + 4));
  EXPECT_LT(m, 1e-18);
}

TEST_F(CliTest, FitBatteryNoisy) {
  spit(dir_ / "s.csv", samples_csv(BatteryModel::kDefaultCoefficients, 427.21, 400, 0.01));
  const auto r = cli({"fit-battery", (dir_ / "s.csv").string(), "--tmax", "427.21"});
  ASSERT_EQ(r.code, 0) << r.err;
  const double m = std::stod(r.out.substr(r.out.find("mse=") + 4));
  EXPECT_GT(m, 0.5e-4);
  EXPECT_LT(m, 2e-4);
}

TEST_F(CliTest, FitBatteryUnderdetermined) {
  spit(dir_ / "s.csv", "time_s,charge\n0,1\n10,0.9\n20,0.8\n");
  const auto r = cli({"fit-battery", (dir_ / "s.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("underdetermined"), std::string::npos);
}

#ifdef CFSIM_BINARY
TEST_F(CliTest, BinaryIsDeterministic) {
  spit(dir_ / "hover.scn", kHover);
  for (const char* sub : {"a", "b"}) {
    const std::string cmd = std::string(CFSIM_BINARY) + " run " + (dir_ / "hover.scn").string() +
                            " --out " + (dir_ / sub).string() + " > " + (dir_ / sub).string() +
                            ".txt";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
  }
  EXPECT_EQ(slurp(dir_ / "a" / "cf1.csv"), slurp(dir_ / "b" / "cf1.csv"));
  EXPECT_EQ(slurp(dir_ / "a.txt"), slurp(dir_ / "b.txt"));
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = CFSIM_BINARY;
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " experiment nope 2>/dev/null").c_str())), 1);
  spit(dir_ / "bad.scn", "format_version = 1\n[drone]\n");
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " run " + (dir_ / "bad.scn").string() + " 2>/dev/null").c_str())), 2);
}
#endif

}  // namespace
}  // namespace cfsim

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypflow/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = HYPFLOW_CONFIG_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string(HYPFLOW_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hypflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunWritesOutputs) {
  ASSERT_EQ(run("run " + (kConfigs / "tripod_sum.json").string() + " --out " + dir_.string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "plot.gp"));
  const auto summary = hypflow::io::load_json(dir_ / "summary.json");
  EXPECT_EQ(summary.at("status"), "pass");
  EXPECT_EQ(summary.at("boundary_limit").at("direction"), "U");
}

TEST_F(Cli, SeveralConfigsInParallelMatchSerialRuns) {
  const std::string cfgs = (kConfigs / "line_tree.json").string() + " " + (kConfigs / "euclid_sum.json").string();
  ASSERT_EQ(run("run " + cfgs + " --jobs 2 --out " + (dir_ / "par").string()), 0);
  ASSERT_EQ(run("run " + cfgs + " --jobs 1 --out " + (dir_ / "ser").string()), 0);
  for (const char* name : {"line_tree", "euclid_sum"}) {
    const auto a = slurp(dir_ / "par" / name / "trajectory.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir_ / "ser" / name / "trajectory.csv"));
  }
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("run " + (kConfigs / "invalid/truncated.json").string() + " --out " + dir_.string()), 2);
  EXPECT_EQ(run("run " + (kConfigs / "invalid/point_off_space.json").string() + " --out " + dir_.string()), 2);
  EXPECT_EQ(run("run " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, NonConvexFunctionExitsOne) {
  auto doc = hypflow::io::load_json(kConfigs / "tripod_sum.json");
  doc["space"] = (kConfigs / "spaces/tripod.json").string();
  doc["function"] = (kConfigs / "functions/negative_distance.json").string();
  std::ofstream(dir_ / "concave.json") << doc.dump();
  EXPECT_EQ(run("run " + (dir_ / "concave.json").string() + " --out " + (dir_ / "out").string()), 1);
  EXPECT_EQ(run("slopes " + (kConfigs / "spaces/tripod.json").string() + " " +
                (kConfigs / "functions/negative_distance.json").string()),
            1);
}

TEST_F(Cli, SlopesReport) {
  EXPECT_EQ(run("slopes " + (kConfigs / "spaces/tripod.json").string() + " " +
                (kConfigs / "functions/tripod_sum.json").string()),
            0);
}

TEST_F(Cli, DeltaWritesEstimate) {
  auto space = hypflow::io::load_json(kConfigs / "spaces/tripod.json");
  space["sample"] = {{"kind", "uniform"}, {"count", 12}, {"seed", 3}};
  std::ofstream(dir_ / "tripod.json") << space.dump();
  ASSERT_EQ(run("delta " + (dir_ / "tripod.json").string() + " --exhaustive --out " + dir_.string()), 0);
  const auto est = hypflow::io::load_json(dir_ / "delta.json");
  EXPECT_LE(std::stod(est.at("delta_hat").get<std::string>()), 1e-12);
  // two core vertices are too few for a four-point estimate
  EXPECT_EQ(run("delta " + (kConfigs / "spaces/tripod.json").string() + " --out " + dir_.string()), 2);
}

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = fs::path(QPLR_SOURCE_DIR) / "configs";

int run(const std::string& args) {
  const std::string cmd = std::string(QPLR_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / ("qplr_cli_" + name + "_" + std::to_string(::getpid()) + ".json");
  std::ofstream(path) << text;
  return path;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate --config x.json"), 2);
  EXPECT_EQ(run("ids"), 2);
  EXPECT_EQ(run("ids --config /nonexistent.json"), 2);
  const auto bad = write_config("bad", R"({"windw": 64})");
  EXPECT_EQ(run("ids --config " + bad.string()), 2);
  const auto broken = write_config("broken", R"({"window": )");
  EXPECT_EQ(run("ids --config " + broken.string()), 2);
  fs::remove(bad);
  fs::remove(broken);
}

TEST(Cli, NumericalStageError) {
  const auto cfg = write_config("contain", R"({"window": 8, "ids_window": 64, "t_grid": [1, 100]})");
  const auto out = fs::temp_directory_path() / ("qplr_cli_contain_" + std::to_string(::getpid()));
  EXPECT_EQ(run("qnorm --config " + cfg.string() + " --out " + out.string()), 3);
  fs::remove(cfg);
  fs::remove_all(out);
}

TEST(Cli, CheckFailureExitsOne) {
  // No finite window meets a 1e-6 tolerance on the group-velocity comparison.
  const auto cfg = write_config("strict", R"({
    "potential": {"type": "amo", "lambda": 0.5}, "sampling": {"count": 8}, "window": 512, "ids_window": 512,
    "delta_n": 0.004, "chain": {"n": 4, "times": [0.5]}, "checks": {"q_vs_groupvel": 1e-6}})");
  const auto out = fs::temp_directory_path() / ("qplr_cli_strict_" + std::to_string(::getpid()));
  EXPECT_EQ(run("verify --config " + cfg.string() + " --out " + out.string()), 1);
  fs::remove(cfg);
  fs::remove_all(out);
}

TEST(Cli, VerifyWithSeedAndWorkers) {
  const auto out = fs::temp_directory_path() / ("qplr_cli_verify_" + std::to_string(::getpid()));
  EXPECT_EQ(run("verify --config " + (kConfigs / "small.json").string() + " --out " + out.string() +
                " --workers 2 --seed 3"),
            0);
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_EQ(run("verify --config " + (kConfigs / "small.json").string() + " --workers 0"), 2);
  fs::remove_all(out);
}

}  // namespace

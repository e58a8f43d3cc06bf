#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "offpolicy/sweep.hpp"

using namespace offpolicy;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "offpolicy_sweep_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepConfig tiny(const fs::path& out) {
  SweepConfig c;
  c.algorithms = {"td"};
  c.runs = 1;
  c.steps = 100;
  c.mu_samples = 10000;
  c.out = out.string();
  c.write_raw = false;
  c.rerun_runs = 1;
  c.workers = 1;
  return c;
}

}  // namespace

TEST(SweepConfig, DefaultsRoundTripThroughJson) {
  const SweepConfig c;
  const auto back = sweep_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  EXPECT_EQ(c.steps, 20000U);
  EXPECT_EQ(c.runs, 50U);
  EXPECT_EQ(c.algorithms.size(), 11U);
}

TEST(SweepConfig, UnknownKeyRejected) {
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"stepz": 5})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"steps": "many"})")), ConfigError);
  EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse("[1,2]")), ConfigError);
}

TEST(SweepConfig, Validation) {
  SweepConfig c;
  c.algorithms.clear();
  EXPECT_THROW(validate(c), ConfigError);
  c = SweepConfig{};
  c.runs = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = SweepConfig{};
  c.steps = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = SweepConfig{};
  c.algorithms = {"sarsa"};
  EXPECT_THROW(validate(c), ConfigError);
  c = SweepConfig{};
  c.alpha = std::vector<double>{0.3};
  EXPECT_THROW(validate(c), ConfigError);
  c.allow_custom_grid = true;
  EXPECT_NO_THROW(validate(c));
  c = SweepConfig{};
  c.alpha = std::vector<double>{0.25, 0.5};
  c.eta = std::vector<double>{1.0};
  EXPECT_NO_THROW(validate(c));
  c.rerun_criterion = "median";
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Sweep, TdGridWritesAllRows) {
  const auto dir = scratch_dir("td_grid");
  const auto outcome = run_sweep(tiny(dir));
  EXPECT_EQ(outcome.rows.size(), 228U);
  EXPECT_EQ(read_summary(dir / "summary.csv").size(), 228U);
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  EXPECT_EQ(outcome.reruns.size(), 12U);
  EXPECT_TRUE(fs::exists(dir / "reruns" / "index.csv"));
}

TEST(Sweep, EmptyAlgorithmListIsConfigError) {
  auto c = tiny(scratch_dir("empty"));
  c.algorithms.clear();
  EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(Sweep, RawFilesAndOverrides) {
  const auto dir = scratch_dir("raw");
  auto c = tiny(dir);
  c.algorithms = {"gtd", "etd_beta", "abtd"};
  c.runs = 2;
  c.write_raw = true;
  c.alpha = std::vector<double>{1.0 / 64, 1.0 / 16};
  c.lambda = std::vector<double>{0.0};
  c.zeta = std::vector<double>{0.5};
  c.eta = std::vector<double>{1.0, 4.0};
  c.beta = std::vector<double>{0.0, 0.2};
  const auto outcome = run_sweep(c);
  EXPECT_EQ(outcome.rows.size(), 4U + 4U + 2U);
  for (const auto& r : outcome.rows) {
    const auto raw = read_raw(dir / "raw" / (instance_key(r.spec) + ".csv"));
    ASSERT_EQ(raw.size(), 2U);
    EXPECT_EQ(raw[0].rve.size(), 101U);
  }
}

TEST(Sweep, ByteIdenticalAcrossWorkerCounts) {
  const auto a = scratch_dir("w1");
  const auto b = scratch_dir("w3");
  auto ca = tiny(a);
  ca.algorithms = {"td", "htd"};
  ca.alpha = std::vector<double>{1.0 / 256, 1.0 / 32, 0.5};
  ca.eta = std::vector<double>{0.25};
  ca.runs = 3;
  ca.write_raw = true;
  auto cb = ca;
  cb.out = b.string();
  cb.workers = 3;
  run_sweep(ca);
  run_sweep(cb);
  EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
  EXPECT_EQ(slurp(a / "reruns" / "index.csv"), slurp(b / "reruns" / "index.csv"));
  for (const auto& entry : fs::directory_iterator(a / "raw")) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / "raw" / entry.path().filename()));
  }
}

#ifdef OFFPOLICY_CLI_PATH

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(OFFPOLICY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  EXPECT_EQ(cli(""), 1);
  EXPECT_EQ(cli("sweep --bogus"), 1);
  EXPECT_EQ(cli("frobnicate"), 1);
  EXPECT_EQ(cli("sweep --print-config"), 0);
  EXPECT_EQ(cli("report --kind waterfall --in " + (dir / "missing").string() + " --out " + (dir / "w.csv").string()), 3);
  EXPECT_EQ(cli("report --kind histogram --in " + dir.string() + " --out " + (dir / "w.csv").string()), 1);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"algorithms": []})";
  }
  EXPECT_EQ(cli("sweep --config " + (dir / "bad.json").string() + " --out " + (dir / "out").string()), 1);

  {
    std::ofstream cfg(dir / "td.json");
    cfg << R"({"algorithms": ["td"], "runs": 1, "steps": 100, "mu_samples": 10000, "write_raw": false, "rerun_runs": 1})";
  }
  EXPECT_EQ(cli("sweep --config " + (dir / "td.json").string() + " --workers 2 --out " + (dir / "out").string()), 0);
  EXPECT_EQ(read_summary(dir / "out" / "summary.csv").size(), 228U);
  EXPECT_EQ(cli("report --kind sensitivity --in " + (dir / "out").string() + " --out " + (dir / "s.csv").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "s.csv"));
}

#endif

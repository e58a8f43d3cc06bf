#include <gtest/gtest.h>

#include <filesystem>

#include "offpolicy/csv.hpp"
#include "offpolicy/random.hpp"

using namespace offpolicy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "offpolicy_csv_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Csv, SplitKeepsEmptyFields) {
  EXPECT_EQ(csv::split("a,,b,"), (std::vector<std::string>{"a", "", "b", ""}));
  EXPECT_EQ(csv::split("x"), (std::vector<std::string>{"x"}));
}

TEST(Csv, ParseRejectsGarbage) {
  EXPECT_THROW(csv::parse_real("1.5x"), IoError);
  EXPECT_THROW(csv::parse_real(""), IoError);
  EXPECT_FALSE(csv::parse_optional("").has_value());
}

// Random rows survive a write/read cycle bit for bit.
TEST(Csv, SummaryRoundTrip) {
  Rng rng(1);
  std::vector<SummaryRow> rows;
  for (Algorithm a : kAllAlgorithms) {
    const auto specs = expand_grid(a);
    for (int k = 0; k < 20; ++k) {
      SummaryRow r;
      r.spec = specs[rng.below(specs.size())];
      r.auc_mean = rng.uniform();
      r.auc_stderr = rng.uniform() * 1e-3;
      r.final5_mean = rng.uniform() / 3.0;
      r.final5_stderr = rng.uniform() * 1e-7;
      r.unstable = rng.bernoulli(0.3);
      r.diverged_runs = rng.below(50);
      rows.push_back(r);
    }
  }
  const auto path = scratch("summary.csv");
  write_summary(path, rows);
  const auto back = read_summary(path);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(instance_key(back[i].spec), instance_key(rows[i].spec));
    EXPECT_EQ(back[i].spec.eta, rows[i].spec.eta);
    EXPECT_EQ(back[i].auc_mean, rows[i].auc_mean);
    EXPECT_EQ(back[i].auc_stderr, rows[i].auc_stderr);
    EXPECT_EQ(back[i].final5_mean, rows[i].final5_mean);
    EXPECT_EQ(back[i].final5_stderr, rows[i].final5_stderr);
    EXPECT_EQ(back[i].unstable, rows[i].unstable);
    EXPECT_EQ(back[i].diverged_runs, rows[i].diverged_runs);
  }
}

TEST(Csv, SummaryHeaderIsExact) {
  const auto path = scratch("empty_summary.csv");
  write_summary(path, {});
  auto in = csv::open_in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "algorithm,alpha,lambda,eta,beta,zeta,auc_mean,auc_stderr,final5_mean,final5_stderr,unstable,diverged_runs");
}

TEST(Csv, RawRoundTrip) {
  Rng rng(2);
  std::vector<RunResult> runs(3);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    runs[k].run_index = k;
    for (int i = 0; i < 50; ++i) runs[k].rve.push_back(rng.uniform());
  }
  const auto path = scratch("raw.csv");
  write_raw(path, runs);
  const auto back = read_raw(path);
  ASSERT_EQ(back.size(), 3U);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back[k].run_index, k);
    EXPECT_EQ(back[k].rve, runs[k].rve);
  }
}

TEST(Csv, FeatureMapAndDistributionRoundTrip) {
  const FeatureMap fm = generate_feature_map(4, 6, 3);
  write_feature_map_csv(scratch("fm.csv"), fm);
  EXPECT_EQ(read_feature_map_csv(scratch("fm.csv")), fm);

  const TaskSpec task;
  const auto mu = stationary_distribution_sampled(task, behavior_policy(task), 12345, 1);
  write_distribution_csv(scratch("mu.csv"), mu);
  EXPECT_EQ(read_distribution_csv(scratch("mu.csv")).weights, mu.weights);
}

TEST(Csv, MissingFileIsIoError) {
  EXPECT_THROW(read_summary(scratch("does_not_exist.csv")), IoError);
  EXPECT_THROW(read_raw(scratch("does_not_exist.csv")), IoError);
}

TEST(Csv, WrongHeaderIsIoError) {
  const auto path = scratch("bad_header.csv");
  {
    auto out = csv::open_out(path);
    out << "a,b,c\n1,2,3\n";
  }
  EXPECT_THROW(read_summary(path), IoError);
}

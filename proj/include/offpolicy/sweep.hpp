#ifndef OFFPOLICY_SWEEP_HPP_
#define OFFPOLICY_SWEEP_HPP_

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "offpolicy/csv.hpp"
#include "offpolicy/grid.hpp"
#include "offpolicy/harness.hpp"

namespace offpolicy {

/// Everything that defines a sweep. Serialized as a flat JSON object.
struct SweepConfig {
  std::string task = "collision";
  std::vector<std::string> algorithms = all_algorithm_names();
  std::size_t steps = 20000;
  std::size_t runs = 50;
  std::uint64_t seed_base = 0;
  std::optional<std::vector<double>> alpha;
  std::optional<std::vector<double>> lambda;
  std::optional<std::vector<double>> eta;
  std::optional<std::vector<double>> beta;
  std::optional<std::vector<double>> zeta;
  bool allow_custom_grid = false;
  std::string out = "results";
  unsigned workers = 0;
  bool write_raw = true;
  std::size_t rerun_runs = 50;
  std::uint64_t rerun_seed_base = 1'000'000;
  std::string rerun_criterion = "auc";
  std::size_t mu_samples = 1'000'000;

  static std::vector<std::string> all_algorithm_names() {
    std::vector<std::string> out;
    for (Algorithm a : kAllAlgorithms) out.emplace_back(algorithm_name(a));
    return out;
  }
};

inline nlohmann::ordered_json to_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["task"] = c.task;
  j["algorithms"] = c.algorithms;
  j["steps"] = c.steps;
  j["runs"] = c.runs;
  j["seed_base"] = c.seed_base;
  const auto grid = [&](const char* key, const std::optional<std::vector<double>>& v) {
    j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  grid("alpha", c.alpha);
  grid("lambda", c.lambda);
  grid("eta", c.eta);
  grid("beta", c.beta);
  grid("zeta", c.zeta);
  j["allow_custom_grid"] = c.allow_custom_grid;
  j["out"] = c.out;
  j["workers"] = c.workers;
  j["write_raw"] = c.write_raw;
  j["rerun_runs"] = c.rerun_runs;
  j["rerun_seed_base"] = c.rerun_seed_base;
  j["rerun_criterion"] = c.rerun_criterion;
  j["mu_samples"] = c.mu_samples;
  return j;
}

/// Unknown keys and type mismatches are errors.
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SweepConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      const auto grid = [&]() -> std::optional<std::vector<double>> {
        if (value.is_null()) return std::nullopt;
        return value.get<std::vector<double>>();
      };
      if (key == "task") c.task = value.get<std::string>();
      else if (key == "algorithms") c.algorithms = value.get<std::vector<std::string>>();
      else if (key == "steps") c.steps = value.get<std::size_t>();
      else if (key == "runs") c.runs = value.get<std::size_t>();
      else if (key == "seed_base") c.seed_base = value.get<std::uint64_t>();
      else if (key == "alpha") c.alpha = grid();
      else if (key == "lambda") c.lambda = grid();
      else if (key == "eta") c.eta = grid();
      else if (key == "beta") c.beta = grid();
      else if (key == "zeta") c.zeta = grid();
      else if (key == "allow_custom_grid") c.allow_custom_grid = value.get<bool>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "workers") c.workers = value.get<unsigned>();
      else if (key == "write_raw") c.write_raw = value.get<bool>();
      else if (key == "rerun_runs") c.rerun_runs = value.get<std::size_t>();
      else if (key == "rerun_seed_base") c.rerun_seed_base = value.get<std::uint64_t>();
      else if (key == "rerun_criterion") c.rerun_criterion = value.get<std::string>();
      else if (key == "mu_samples") c.mu_samples = value.get<std::size_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

inline SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return sweep_config_from_json(j);
}

inline SelectionCriterion parse_criterion(const std::string& s) {
  if (s == "auc") return SelectionCriterion::kAuc;
  if (s == "final5") return SelectionCriterion::kFinal5;
  throw ConfigError("unknown rerun criterion '" + s + "' (expected auc or final5)");
}

namespace detail {

inline bool contains_value(const std::vector<double>& set, double x) {
  return std::any_of(set.begin(), set.end(),
                     [x](double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); });
}

inline void check_override(const char* name, const std::optional<std::vector<double>>& values,
                           const std::vector<double>& table, bool allow_custom) {
  if (!values) return;
  if (values->empty()) throw ConfigError(std::string(name) + " override is empty");
  if (allow_custom) return;
  for (double x : *values) {
    if (!contains_value(table, x)) {
      throw ConfigError(std::string(name) + " value " + format_real(x) +
                        " is not in the standard grid (set allow_custom_grid to permit)");
    }
  }
}

}  // namespace detail

inline void validate(const SweepConfig& c) {
  if (c.task != "collision") throw ConfigError("unsupported task '" + c.task + "'");
  if (c.algorithms.empty()) throw ConfigError("algorithm list is empty");
  for (const auto& a : c.algorithms) parse_algorithm(a);
  if (c.steps < 1) throw ConfigError("steps must be >= 1");
  if (c.runs < 1) throw ConfigError("runs must be >= 1");
  if (c.mu_samples < 1) throw ConfigError("mu_samples must be >= 1");
  parse_criterion(c.rerun_criterion);
  const ParameterGrid table;
  detail::check_override("alpha", c.alpha, table.alphas, c.allow_custom_grid);
  detail::check_override("lambda", c.lambda, table.lambdas, c.allow_custom_grid);
  detail::check_override("eta", c.eta, table.etas, c.allow_custom_grid);
  detail::check_override("beta", c.beta, table.betas, c.allow_custom_grid);
  detail::check_override("zeta", c.zeta, table.zetas, c.allow_custom_grid);
}

inline ParameterGrid grid_for(const SweepConfig& c) {
  ParameterGrid g;
  if (c.alpha) g.alphas = *c.alpha;
  if (c.lambda) g.lambdas = *c.lambda;
  if (c.eta) g.etas = *c.eta;
  if (c.beta) g.betas = *c.beta;
  if (c.zeta) g.zetas = *c.zeta;
  return g;
}

inline ExperimentSetup setup_for(const SweepConfig& c) {
  ExperimentSetup s;
  s.steps = c.steps;
  s.mu_samples = c.mu_samples;
  return s;
}

inline std::vector<InstanceSpec> sweep_instances(const SweepConfig& c) {
  const ParameterGrid grid = grid_for(c);
  const AbtdBounds abtd = setup_for(c).abtd();
  std::vector<InstanceSpec> out;
  for (const auto& name : c.algorithms) {
    const auto part = expand_grid(parse_algorithm(name), grid, abtd);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

struct SweepOutcome {
  std::vector<SummaryRow> rows;
  std::vector<RerunResult> reruns;
};

/*!
 * Executes every instance of the configured grid on shared per-run data and
 * writes, under c.out:
 *
 *   config.json          effective configuration
 *   summary.csv          one row per instance
 *   raw/<key>.csv        per-run curves (when write_raw)
 *   reruns/index.csv     best instance per (algorithm, lambda|zeta), re-run on fresh seeds
 *   reruns/<key>.csv     the fresh runs' curves
 *
 * Work is computed in parallel chunks and written by this thread in instance
 * order, so outputs do not depend on the worker count.
 */
inline SweepOutcome run_sweep(const SweepConfig& c, std::ostream* progress = nullptr) {
  validate(c);
  namespace fs = std::filesystem;
  const fs::path out_dir(c.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());
  {
    auto cfg = csv::open_out(out_dir / "config.json");
    cfg << to_json(c).dump(2) << '\n';
  }

  const ExperimentSetup setup = setup_for(c);
  const auto instances = sweep_instances(c);
  if (progress) *progress << "preparing " << c.runs << " runs\n";
  const auto data = prepare_runs(setup, c.runs, c.seed_base, c.workers);
  const std::span<const RunData> data_view(data);

  SweepOutcome outcome;
  outcome.rows.reserve(instances.size());
  std::vector<EvaluatedInstance> evaluated;
  evaluated.reserve(instances.size());

  const unsigned workers = c.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : c.workers;
  const std::size_t chunk = std::max<std::size_t>(1, workers) * 4;
  std::vector<std::vector<RunResult>> chunk_runs;
  std::vector<AggregateResult> chunk_aggs;
  for (std::size_t start = 0; start < instances.size(); start += chunk) {
    const std::size_t n = std::min(chunk, instances.size() - start);
    chunk_runs.assign(n, {});
    chunk_aggs.assign(n, {});
    parallel_for(n, workers, [&](std::size_t i) {
      auto runs = execute_instance(instances[start + i], data_view, c.steps);
      chunk_aggs[i] = aggregate(runs);
      if (c.write_raw) chunk_runs[i] = std::move(runs);
    });
    for (std::size_t i = 0; i < n; ++i) {
      const auto& spec = instances[start + i];
      outcome.rows.push_back(SummaryRow::from(spec, chunk_aggs[i]));
      evaluated.push_back(EvaluatedInstance{spec, std::move(chunk_aggs[i])});
      evaluated.back().result.mean.clear();
      evaluated.back().result.stderr_curve.clear();
      if (c.write_raw) write_raw(out_dir / "raw" / (instance_key(spec) + ".csv"), chunk_runs[i]);
    }
    if (progress) *progress << "[" << start + n << "/" << instances.size() << "] instances\n";
  }
  write_summary(out_dir / "summary.csv", outcome.rows);

  if (c.rerun_runs > 0) {
    const SelectionCriterion criterion = parse_criterion(c.rerun_criterion);
    std::map<std::pair<int, double>, std::vector<EvaluatedInstance>> groups;
    for (const auto& e : evaluated) {
      groups[{static_cast<int>(e.spec.algorithm), trace_parameter(e.spec)}].push_back(e);
    }
    auto index = csv::open_out(out_dir / "reruns" / "index.csv");
    index << kRerunIndexHeader << '\n';
    for (const auto& [key, members] : groups) {
      auto rerun = select_best_and_rerun(members, criterion, c.rerun_runs, c.rerun_seed_base, setup, workers);
      const std::string file = instance_key(rerun.spec) + ".csv";
      write_raw(out_dir / "reruns" / file, rerun.runs);
      const auto& s = rerun.spec;
      index << algorithm_name(s.algorithm) << ',' << format_real(s.alpha) << ',' << csv::optional_field(s.lambda)
            << ',' << csv::optional_field(s.eta) << ',' << csv::optional_field(s.beta) << ','
            << csv::optional_field(s.zeta) << ',' << c.rerun_criterion << ','
            << format_real(criterion_value(rerun.original, criterion)) << ',' << format_real(rerun.fresh.auc) << ','
            << format_real(rerun.fresh.auc_stderr) << ',' << format_real(rerun.fresh.final5_mean) << ','
            << format_real(rerun.fresh.final5_stderr) << ',' << file << '\n';
      rerun.runs.clear();
      outcome.reruns.push_back(std::move(rerun));
    }
    if (progress) *progress << "reran " << groups.size() << " best instances\n";
  }
  return outcome;
}

}  // namespace offpolicy

#endif  // OFFPOLICY_SWEEP_HPP_

#ifndef OFFPOLICY_HARNESS_HPP_
#define OFFPOLICY_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "offpolicy/collision.hpp"
#include "offpolicy/grid.hpp"
#include "offpolicy/learners.hpp"
#include "offpolicy/value_error.hpp"

namespace offpolicy {

/// A weight vector leaving this box (max-norm) counts as diverged.
inline constexpr double kDivergenceBound = 1e6;
/// Stored error ceiling for diverged runs.
inline constexpr double kClampedError = 10.0;

struct ExperimentSetup {
  TaskSpec task{};
  int feature_dim = 6;
  int active_features = 3;
  std::size_t steps = 20000;
  std::size_t mu_samples = 1'000'000;

  Policy behavior() const { return behavior_policy(task); }
  Policy target() const { return target_policy(task); }
  AbtdBounds abtd() const { return abtd_bounds(task, behavior(), target()); }
};

/// Everything fixed per run and shared by every instance: the feature map,
/// the estimated state distribution and the transition stream.
struct RunData {
  std::uint64_t seed = 0;
  FeatureMap features;
  StateDistribution mu;
  Vector values;
  std::vector<Transition> transitions;
};

inline RunData prepare_run(const ExperimentSetup& setup, std::uint64_t run_seed) {
  RunData run;
  run.seed = run_seed;
  run.features = generate_feature_map(run_seed, setup.feature_dim, setup.active_features, setup.task.num_states);
  run.mu = stationary_distribution_sampled(setup.task, setup.behavior(), setup.mu_samples, run_seed);
  run.values = true_values(setup.task);
  if (setup.steps > 0) {
    run.transitions = sample_stream(setup.task, setup.behavior(), setup.target(), run.features, setup.steps, run_seed);
  }
  return run;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). The first exception thrown by any call is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned k = 0; k < workers; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Run k uses seed seed_base + k for its trajectory, features and mu_b estimate.
inline std::vector<RunData> prepare_runs(const ExperimentSetup& setup, std::size_t runs, std::uint64_t seed_base,
                                         unsigned workers = 1) {
  std::vector<RunData> out(runs);
  parallel_for(runs, workers, [&](std::size_t k) { out[k] = prepare_run(setup, seed_base + k); });
  return out;
}

struct RunResult {
  std::vector<double> rve;  // steps + 1 entries, rve[0] at w = 0
  bool diverged = false;
  std::size_t run_index = 0;
};

namespace detail {

inline bool out_of_bounds(const LearnerState& st) {
  return !st.finite() || st.w.lpNorm<Eigen::Infinity>() > kDivergenceBound;
}

}  // namespace detail

/*!
 * Runs one instance over one run's stream, recording RVE after every step.
 * On divergence (non-finite state or |w|_inf > kDivergenceBound) the weights
 * freeze and the remaining error is min(measured, kClampedError).
 */
inline RunResult execute_run(const InstanceSpec& spec, const RunData& run, std::size_t run_index, std::size_t steps) {
  if (steps > run.transitions.size()) throw ConfigError("run is shorter than the requested number of steps");
  RunResult result;
  result.run_index = run_index;
  result.rve.reserve(steps + 1);

  LearnerState st = LearnerState::zeros(run.features.dim());
  result.rve.push_back(rve(st.w, run.features, run.mu, run.values));
  for (std::size_t i = 0; i < steps; ++i) {
    step(st, run.transitions[i], spec);
    if (detail::out_of_bounds(st)) {
      const double measured = rve(st.w, run.features, run.mu, run.values);
      const double frozen = std::isfinite(measured) ? std::min(measured, kClampedError) : kClampedError;
      result.diverged = true;
      result.rve.resize(steps + 1, frozen);
      return result;
    }
    result.rve.push_back(rve(st.w, run.features, run.mu, run.values));
  }
  return result;
}

inline std::vector<RunResult> execute_instance(const InstanceSpec& spec, std::span<const RunData> runs,
                                               std::size_t steps) {
  validate(spec);
  std::vector<RunResult> out;
  out.reserve(runs.size());
  for (std::size_t k = 0; k < runs.size(); ++k) out.push_back(execute_run(spec, runs[k], k, steps));
  return out;
}

inline std::vector<RunResult> execute_instance(const InstanceSpec& spec, std::size_t runs, std::size_t steps,
                                               std::uint64_t seed_base, ExperimentSetup setup = {}) {
  if (runs == 0) throw ConfigError("at least one run is required");
  setup.steps = steps;
  const auto data = prepare_runs(setup, runs, seed_base);
  return execute_instance(spec, std::span<const RunData>(data), steps);
}

struct AggregateResult {
  std::vector<double> mean;
  std::vector<double> stderr_curve;
  double auc = 0.0;
  double auc_stderr = 0.0;
  double final5_mean = 0.0;
  double final5_stderr = 0.0;
  bool unstable = false;
  std::size_t diverged_runs = 0;
  std::size_t runs = 0;
};

/// Length of the trailing window used for final-performance statistics (5%, at least one step).
inline std::size_t final_window(std::size_t steps) { return std::max<std::size_t>(1, steps / 20); }

/// True iff the average error exceeds the average error at t = 0.
inline bool flag_unstable(const AggregateResult& agg) { return !agg.mean.empty() && agg.auc > agg.mean.front(); }

namespace detail {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Running means reproduce a constant input exactly, which keeps the strict
// comparison in flag_unstable() meaningful for instances that never move.
inline double running_mean(std::span<const double> xs) {
  double m = 0.0;
  double k = 0.0;
  for (double x : xs) m += (x - m) / ++k;
  return m;
}

inline MeanStderr mean_stderr(std::span<const double> xs) {
  MeanStderr out;
  const auto n = static_cast<double>(xs.size());
  out.mean = running_mean(xs);
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

inline double window_mean(const std::vector<double>& curve, std::size_t first, std::size_t last) {
  return running_mean(std::span<const double>(curve).subspan(first, last - first));
}

}  // namespace detail

/*!
 * Cross-run statistics. Runs are processed in run_index order, so the
 * result does not depend on the order of the input. AUC excludes step 0;
 * with zero steps it degenerates to the step-0 error.
 */
inline AggregateResult aggregate(std::span<const RunResult> results) {
  if (results.empty()) throw ConfigError("cannot aggregate an empty run set");
  std::vector<const RunResult*> runs;
  for (const auto& r : results) runs.push_back(&r);
  std::sort(runs.begin(), runs.end(), [](auto* a, auto* b) { return a->run_index < b->run_index; });

  const std::size_t points = runs.front()->rve.size();
  for (auto* r : runs) {
    if (r->rve.size() != points) throw ConfigError("runs have different lengths");
  }
  const std::size_t steps = points - 1;
  const std::size_t first = steps == 0 ? 0 : 1;
  const std::size_t tail = steps == 0 ? 0 : points - final_window(steps);

  AggregateResult agg;
  agg.runs = runs.size();
  agg.mean.resize(points);
  agg.stderr_curve.resize(points);
  std::vector<double> column(runs.size());
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t k = 0; k < runs.size(); ++k) column[k] = runs[k]->rve[i];
    const auto ms = detail::mean_stderr(column);
    agg.mean[i] = ms.mean;
    agg.stderr_curve[i] = ms.stderr_;
  }

  std::vector<double> run_auc(runs.size());
  std::vector<double> run_final(runs.size());
  for (std::size_t k = 0; k < runs.size(); ++k) {
    run_auc[k] = detail::window_mean(runs[k]->rve, first, points);
    run_final[k] = detail::window_mean(runs[k]->rve, tail, points);
    if (runs[k]->diverged) ++agg.diverged_runs;
  }
  const auto auc = detail::mean_stderr(run_auc);
  const auto fin = detail::mean_stderr(run_final);
  agg.auc = auc.mean;
  agg.auc_stderr = auc.stderr_;
  agg.final5_mean = fin.mean;
  agg.final5_stderr = fin.stderr_;
  agg.unstable = flag_unstable(agg);
  return agg;
}

enum class SelectionCriterion { kAuc, kFinal5 };

struct EvaluatedInstance {
  InstanceSpec spec;
  AggregateResult result;
};

inline double criterion_value(const AggregateResult& r, SelectionCriterion c) {
  return c == SelectionCriterion::kAuc ? r.auc : r.final5_mean;
}

/// argmin over the criterion; ties go to the lexicographically smaller parameters.
inline const EvaluatedInstance& select_best(std::span<const EvaluatedInstance> instances, SelectionCriterion c) {
  if (instances.empty()) throw ConfigError("cannot select from an empty instance set");
  const EvaluatedInstance* best = &instances.front();
  for (const auto& e : instances.subspan(1)) {
    const double a = criterion_value(e.result, c);
    const double b = criterion_value(best->result, c);
    if (a < b || (a == b && parameter_less(e.spec, best->spec))) best = &e;
  }
  return *best;
}

struct RerunResult {
  InstanceSpec spec;
  AggregateResult original;
  AggregateResult fresh;
  std::vector<RunResult> runs;
};

/// Picks the best instance and re-executes it on fresh seeds seed_base2 + k;
/// only the fresh runs contribute to the reported aggregate.
inline RerunResult select_best_and_rerun(std::span<const EvaluatedInstance> instances, SelectionCriterion criterion,
                                         std::size_t extra_runs, std::uint64_t seed_base2,
                                         const ExperimentSetup& setup = {}, unsigned workers = 1) {
  const EvaluatedInstance& best = select_best(instances, criterion);
  if (extra_runs == 0) throw ConfigError("rerun needs at least one run");
  const auto data = prepare_runs(setup, extra_runs, seed_base2, workers);
  RerunResult out;
  out.spec = best.spec;
  out.original = best.result;
  out.runs.resize(extra_runs);
  validate(best.spec);
  parallel_for(extra_runs, workers, [&](std::size_t k) { out.runs[k] = execute_run(best.spec, data[k], k, setup.steps); });
  out.fresh = aggregate(out.runs);
  return out;
}

}  // namespace offpolicy

#endif  // OFFPOLICY_HARNESS_HPP_

#ifndef OFFPOLICY_VERIFY_HPP_
#define OFFPOLICY_VERIFY_HPP_

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "offpolicy/collision.hpp"
#include "offpolicy/counterexample.hpp"
#include "offpolicy/grid.hpp"
#include "offpolicy/harness.hpp"
#include "offpolicy/learners.hpp"
#include "offpolicy/random.hpp"
#include "offpolicy/value_error.hpp"

namespace offpolicy {

using StepFunction = double (*)(LearnerState&, const Transition&, const LearnerConfig&);

/// The step functions the checks exercise. Swapping one out lets a test
/// confirm that the suite notices a broken learner.
struct StepTable {
  std::array<StepFunction, kAllAlgorithms.size()> by_algorithm = {
      step_offpolicy_td, step_gtd, step_gtd2,     step_htd,         step_proximal_gtd2, step_tdrc,
      step_etd,          step_etd_beta, step_tree_backup, step_vtrace, step_abtd,
  };
  StepFunction td_update_form = step_offpolicy_td_update_form;

  StepFunction operator[](Algorithm a) const { return by_algorithm[static_cast<std::size_t>(a)]; }
  StepFunction& operator[](Algorithm a) { return by_algorithm[static_cast<std::size_t>(a)]; }
};

struct CheckResult {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<CheckResult(const StepTable&)> run;
};

namespace verify_detail {

inline std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

/// ||a - b||_inf / ||b||_inf, or the absolute deviation when b is zero.
inline double relative_deviation(const Vector& a, const Vector& b) {
  const double diff = (a - b).lpNorm<Eigen::Infinity>();
  const double scale = b.lpNorm<Eigen::Infinity>();
  return scale > 0.0 ? diff / scale : diff;
}

inline CheckResult near(const std::string& what, const Vector& got, const Vector& want, double tol = 1e-12) {
  const double dev = (got - want).lpNorm<Eigen::Infinity>();
  return {dev <= tol, what + fmt(" deviation %.3g", dev)};
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Reference scenario: first step of an episode with rho = 2.
inline Transition reference_transition() {
  Transition t;
  t.x = vec({1.0, 0.0});
  t.x_next = vec({0.0, 1.0});
  t.reward = 1.0;
  t.discount_next = 0.9;
  t.pi = 1.0;
  t.b = 0.5;
  t.rho = 2.0;
  return t;
}

inline LearnerState reference_state() {
  LearnerState st = LearnerState::zeros(2);
  st.w = vec({0.5, 0.25});
  return st;
}

inline LearnerConfig reference_config(Algorithm a) {
  LearnerConfig c;
  c.algorithm = a;
  c.alpha = 0.1;
  if (uses_lambda(a)) c.lambda = 0.5;
  if (uses_eta(a)) c.eta = 0.5;  // alpha_v = 0.05
  if (a == Algorithm::kTdrc) c.eta = 1.0;
  if (uses_beta(a)) c.beta = 0.9;
  if (uses_zeta(a)) c.zeta = 0.5;
  return c;
}

struct ReferenceExpectation {
  Algorithm algorithm;
  Vector w;
  Vector v;
};

inline std::vector<ReferenceExpectation> reference_expectations() {
  const Vector zero = vec({0.0, 0.0});
  const Vector td_w = vec({0.645, 0.25});
  return {
      {Algorithm::kOffPolicyTd, td_w, zero},
      {Algorithm::kGtd, td_w, vec({0.0725, 0.0})},
      {Algorithm::kGtd2, vec({0.5, 0.25}), vec({0.0725, 0.0})},
      {Algorithm::kProximalGtd2, vec({0.50725, 0.243475}), vec({0.068875, 0.0})},
      {Algorithm::kHtd, td_w, vec({0.0725, 0.0})},
      {Algorithm::kTdrc, td_w, vec({0.145, 0.0})},
      {Algorithm::kEtd, td_w, zero},
      {Algorithm::kEtdBeta, td_w, zero},
      {Algorithm::kTreeBackup, td_w, zero},
      {Algorithm::kVtrace, td_w, zero},
      {Algorithm::kAbtd, td_w, zero},
  };
}

inline const FeatureMap& check_features() {
  static const FeatureMap fm = generate_feature_map(7, 6, 3);
  return fm;
}

/// A 1000-step Collision stream under the standard behavior/target pair.
inline const std::vector<Transition>& offpolicy_stream() {
  static const std::vector<Transition> stream = [] {
    const TaskSpec task;
    return sample_stream(task, behavior_policy(task), target_policy(task), check_features(), 1000, 11);
  }();
  return stream;
}

/// Same task, but the behavior policy is also the target, so every rho is 1.
inline const std::vector<Transition>& onpolicy_stream() {
  static const std::vector<Transition> stream = [] {
    const TaskSpec task;
    const Policy b = behavior_policy(task);
    return sample_stream(task, b, b, check_features(), 1000, 12);
  }();
  return stream;
}

/// Random dense features with every rho in [0, 1].
inline const std::vector<Transition>& bounded_rho_stream() {
  static const std::vector<Transition> stream = [] {
    Rng rng(13);
    std::vector<Transition> out;
    for (int i = 0; i < 1000; ++i) {
      Transition t;
      t.x = Vector(4);
      t.x_next = Vector(4);
      for (int j = 0; j < 4; ++j) {
        t.x(j) = rng.uniform() - 0.5;
        t.x_next(j) = rng.uniform() - 0.5;
      }
      t.reward = rng.uniform();
      t.discount_next = rng.bernoulli(0.1) ? 0.0 : 0.9;
      if (t.discount_next == 0.0) t.x_next.setZero();
      t.b = 0.2 + 0.8 * rng.uniform();
      t.rho = rng.uniform();
      t.pi = t.rho * t.b;
      out.push_back(t);
    }
    return out;
  }();
  return stream;
}

/// Runs two learners over a stream and reports the largest per-step relative deviation of w.
inline double trajectory_deviation(const std::vector<Transition>& stream, StepFunction f, const LearnerConfig& cf,
                                   StepFunction g, const LearnerConfig& cg) {
  const auto d = stream.front().x.size();
  LearnerState a = LearnerState::zeros(d);
  LearnerState b = LearnerState::zeros(d);
  double worst = 0.0;
  for (const auto& t : stream) {
    f(a, t, cf);
    g(b, t, cg);
    if (!a.finite() || !b.finite()) return INFINITY;
    worst = std::max(worst, relative_deviation(a.w, b.w));
  }
  return worst;
}

inline CheckResult equivalent(const std::vector<Transition>& stream, StepFunction f, const LearnerConfig& cf,
                              StepFunction g, const LearnerConfig& cg) {
  const double dev = trajectory_deviation(stream, f, cf, g, cg);
  return {dev <= 1e-12, fmt("max relative deviation %.3g over %g steps", dev, static_cast<double>(stream.size()))};
}

inline LearnerConfig make_config(Algorithm a, double alpha, std::optional<double> lambda = std::nullopt) {
  LearnerConfig c;
  c.algorithm = a;
  c.alpha = alpha;
  c.lambda = lambda;
  return c;
}

}  // namespace verify_detail

/*!
 * Small-scale checks of the learners, the task and the harness. Each check
 * is deterministic; together they take a few seconds.
 */
inline std::vector<Check> verification_checks() {
  using namespace verify_detail;
  std::vector<Check> checks;
  const auto add = [&](std::string name, std::function<CheckResult(const StepTable&)> fn) {
    checks.push_back(Check{std::move(name), std::move(fn)});
  };

  // Hand-evaluated single steps.
  add("td_error.reference", [](const StepTable&) {
    const double delta = td_error(reference_state().w, reference_transition());
    return CheckResult{std::abs(delta - 0.725) <= 1e-15, fmt("delta %.17g", delta)};
  });
  for (const auto& e : reference_expectations()) {
    add("oracle." + std::string(algorithm_name(e.algorithm)), [e](const StepTable& table) {
      LearnerState st = reference_state();
      table[e.algorithm](st, reference_transition(), reference_config(e.algorithm));
      const auto w = near("w", st.w, e.w);
      const auto v = near("v", st.v, e.v);
      return CheckResult{w.passed && v.passed, w.detail + ", " + v.detail};
    });
  }
  add("oracle.emphasis_second_step", [](const StepTable&) {
    const Emphasis first = emphasis_update(0.0, 1.0, 0.0, 0.5);
    const Emphasis second = emphasis_update(first.followon, 2.0, 0.9, 0.5);
    const bool ok = first.followon == 1.0 && first.emphasis == 1.0 && std::abs(second.followon - 2.8) < 1e-12 &&
                    std::abs(second.emphasis - 1.9) < 1e-12;
    return CheckResult{ok, fmt("F %.17g, M %.17g", second.followon, second.emphasis)};
  });
  add("oracle.abtd_nu", [](const StepTable&) {
    const TaskSpec task;
    const AbtdBounds bounds = abtd_bounds(task, behavior_policy(task), target_policy(task));
    bool ok = bounds.psi0 == 1.0 && bounds.psi_max == 2.0;
    ok = ok && abtd_psi(0.25, bounds) == 0.5 && abtd_nu(0.25, 0.5, 1.0, bounds) == 0.5;
    for (double zeta : {0.5, 0.6, 0.75, 0.9, 1.0}) ok = ok && abtd_nu(zeta, 0.5, 1.0, bounds) == 1.0;
    return CheckResult{ok, fmt("psi0 %g, psi_max %g", bounds.psi0, bounds.psi_max)};
  });

  // Exact equivalences.
  add("equivalence.td_update_form", [](const StepTable& table) {
    double worst = 0.0;
    for (double lambda : {0.0, 0.5, 0.9, 1.0}) {
      const auto c = make_config(Algorithm::kOffPolicyTd, 0.01, lambda);
      worst = std::max(worst, trajectory_deviation(offpolicy_stream(), table[Algorithm::kOffPolicyTd], c,
                                                   table.td_update_form, c));
    }
    return CheckResult{worst <= 1e-12, fmt("max relative deviation %.3g", worst)};
  });
  add("reduction.htd_onpolicy_is_td", [](const StepTable& table) {
    auto htd = make_config(Algorithm::kHtd, 0.02, 0.7);
    htd.eta = 2.0;
    return equivalent(onpolicy_stream(), table[Algorithm::kHtd], htd, table[Algorithm::kOffPolicyTd],
                      make_config(Algorithm::kOffPolicyTd, 0.02, 0.7));
  });
  add("reduction.etd_beta0_is_td", [](const StepTable& table) {
    auto etd = make_config(Algorithm::kEtdBeta, 0.01, 0.5);
    etd.beta = 0.0;
    return equivalent(offpolicy_stream(), table[Algorithm::kEtdBeta], etd, table[Algorithm::kOffPolicyTd],
                      make_config(Algorithm::kOffPolicyTd, 0.01, 0.5));
  });
  add("reduction.etd_beta_gamma_is_etd", [](const StepTable& table) {
    auto etd_beta = make_config(Algorithm::kEtdBeta, 0.005, 0.3);
    etd_beta.beta = TaskSpec{}.discount;
    return equivalent(offpolicy_stream(), table[Algorithm::kEtdBeta], etd_beta, table[Algorithm::kEtd],
                      make_config(Algorithm::kEtd, 0.005, 0.3));
  });
  add("reduction.tdrc_reg0_is_gtd", [](const StepTable& table) {
    auto tdrc = make_config(Algorithm::kTdrc, 0.01, 0.5);
    tdrc.eta = 1.0;
    tdrc.tdrc_reg = 0.0;
    auto gtd = make_config(Algorithm::kGtd, 0.01, 0.5);
    gtd.eta = 1.0;
    return equivalent(offpolicy_stream(), table[Algorithm::kTdrc], tdrc, table[Algorithm::kGtd], gtd);
  });
  add("reduction.gtd_lambda1_is_td", [](const StepTable& table) {
    auto gtd = make_config(Algorithm::kGtd, 0.01, 1.0);
    gtd.eta = 4.0;
    return equivalent(offpolicy_stream(), table[Algorithm::kGtd], gtd, table[Algorithm::kOffPolicyTd],
                      make_config(Algorithm::kOffPolicyTd, 0.01, 1.0));
  });
  add("reduction.vtrace_bounded_rho_is_td", [](const StepTable& table) {
    return equivalent(bounded_rho_stream(), table[Algorithm::kVtrace], make_config(Algorithm::kVtrace, 0.05, 0.8),
                      table[Algorithm::kOffPolicyTd], make_config(Algorithm::kOffPolicyTd, 0.05, 0.8));
  });
  add("reduction.abtd_zeta_invariance", [](const StepTable& table) {
    const AbtdBounds bounds = ExperimentSetup{}.abtd();
    const auto cfg = [&](double zeta) {
      auto c = make_config(Algorithm::kAbtd, 0.01);
      c.zeta = zeta;
      c.abtd = bounds;
      return c;
    };
    const double d1 = trajectory_deviation(offpolicy_stream(), table[Algorithm::kAbtd], cfg(0.5),
                                           table[Algorithm::kAbtd], cfg(0.75));
    const double d2 = trajectory_deviation(offpolicy_stream(), table[Algorithm::kAbtd], cfg(0.5),
                                           table[Algorithm::kAbtd], cfg(1.0));
    const double worst = std::max(d1, d2);
    return CheckResult{worst <= 1e-12, fmt("max relative deviation %.3g", worst)};
  });

  add("determinism.step", [](const StepTable& table) {
    bool same = true;
    for (Algorithm a : kAllAlgorithms) {
      LearnerConfig c = reference_config(a);
      c.abtd = ExperimentSetup{}.abtd();
      LearnerState x = LearnerState::zeros(6);
      LearnerState y = LearnerState::zeros(6);
      for (std::size_t i = 0; i < 200; ++i) {
        table[a](x, offpolicy_stream()[i], c);
        table[a](y, offpolicy_stream()[i], c);
      }
      same = same && x == y;
    }
    return CheckResult{same, same ? "repeat executions agree bit for bit" : "repeat executions differ"};
  });
  add("determinism.run_data", [](const StepTable&) {
    ExperimentSetup setup;
    setup.steps = 500;
    setup.mu_samples = 10000;
    const RunData a = prepare_run(setup, 42);
    const RunData b = prepare_run(setup, 42);
    bool same = a.features == b.features && a.mu.weights == b.mu.weights && a.transitions.size() == b.transitions.size();
    for (std::size_t i = 0; same && i < a.transitions.size(); ++i) {
      same = a.transitions[i].x == b.transitions[i].x && a.transitions[i].rho == b.transitions[i].rho;
    }
    return CheckResult{same, same ? "same seed gives the same run data" : "run data differs between calls"};
  });

  add("divergence.two_state_chain", [](const StepTable& table) {
    const auto track = [&](Algorithm a, double alpha, std::size_t steps, auto&& extra) {
      LearnerConfig c = make_config(a, alpha, 0.0);
      extra(c);
      LearnerState st = LearnerState::zeros(1);
      st.w(0) = 1.0;
      double peak = 1.0;
      std::size_t hit = 0;
      const auto stream = two_state_chain_stream(steps);
      for (std::size_t i = 0; i < stream.size(); ++i) {
        table[a](st, stream[i], c);
        const double m = std::abs(st.w(0));
        if (!std::isfinite(m)) return std::pair<double, std::size_t>{INFINITY, hit ? hit : i + 1};
        peak = std::max(peak, m);
        if (hit == 0 && m >= 10.0) hit = i + 1;
      }
      return std::pair<double, std::size_t>{peak, hit};
    };
    const auto none = [](LearnerConfig&) {};
    const auto td = track(Algorithm::kOffPolicyTd, 0.1, 200, none);
    const auto gtd = track(Algorithm::kGtd, 0.01, 10000, [](LearnerConfig& c) { c.eta = 1.0; });
    const auto gtd2 = track(Algorithm::kGtd2, 0.01, 10000, [](LearnerConfig& c) { c.eta = 1.0; });
    const auto tdrc = track(Algorithm::kTdrc, 0.01, 10000, [](LearnerConfig& c) {
      c.eta = 1.0;
      c.tdrc_reg = 0.1;
    });
    const auto etd = track(Algorithm::kEtd, 0.01, 10000, none);
    const double bounded = std::max({gtd.first, gtd2.first, tdrc.first, etd.first});
    const bool ok = td.second > 0 && td.second <= 200 && bounded <= 2.0;
    return CheckResult{ok, fmt("td reaches 10x at step %g; largest gradient/emphatic peak %.4g",
                               static_cast<double>(td.second), bounded)};
  });

  add("gradient.gtd2_expected_update", [](const StepTable& table) {
    // Expectations over every (state, action) of the task, weighted by the analytic mu_b.
    const TaskSpec task;
    const Policy b = behavior_policy(task);
    const Policy pi = target_policy(task);
    const FeatureMap& fm = check_features();
    const Vector mu = stationary_distribution_analytic(task, b).weights;
    const auto d = fm.dim();
    struct Weighted {
      double p;
      Transition t;
    };
    std::vector<Weighted> all;
    for (int s = 0; s < task.num_states; ++s) {
      for (Action a : {Action::kForward, Action::kTurnaway}) {
        const double pb = b.prob(s, a);
        if (pb == 0.0) continue;
        StateTransition st;
        st.state = s;
        st.action = a;
        st.b = pb;
        st.pi = pi.prob(s, a);
        st.rho = st.pi / st.b;
        if (a == Action::kForward && !task.is_last(s)) {
          st.next_state = s + 1;
          st.discount_next = task.discount;
        } else {
          st.reward = a == Action::kForward ? task.collision_reward : 0.0;
        }
        all.push_back({mu(s) * pb, featurize(st, fm)});
      }
    }
    Matrix A = Matrix::Zero(d, d);
    Matrix C = Matrix::Zero(d, d);
    Vector bvec = Vector::Zero(d);
    for (const auto& [p, t] : all) {
      A += p * t.rho * t.x * (t.x - t.discount_next * t.x_next).transpose();
      C += p * t.x * t.x.transpose();
      bvec += p * t.rho * t.reward * t.x;
    }
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cinv(C);
    const auto pbe = [&](const Vector& w) {
      const Vector r = bvec - A * w;
      return r.dot(cinv.solve(r));
    };
    Vector w(d);
    for (Eigen::Index j = 0; j < d; ++j) w(j) = 0.1 * static_cast<double>(j) - 0.2;
    Vector neg_grad(d);
    const double h = 1e-6;
    for (Eigen::Index j = 0; j < d; ++j) {
      Vector up = w;
      Vector down = w;
      up(j) += h;
      down(j) -= h;
      neg_grad(j) = -(pbe(up) - pbe(down)) / (2.0 * h);
    }
    const Vector v_star = cinv.solve(bvec - A * w);
    LearnerConfig c = make_config(Algorithm::kGtd2, 1.0, 0.0);
    c.eta = 0.0;
    Vector expected = Vector::Zero(d);
    for (const auto& [p, t] : all) {
      LearnerState st = LearnerState::zeros(d);
      st.w = w;
      st.v = v_star;
      table[Algorithm::kGtd2](st, t, c);
      expected += p * (st.w - w);
    }
    const double inner = expected.dot(neg_grad);
    const double cosine = inner / (expected.norm() * neg_grad.norm());
    return CheckResult{inner > 0.0 && cosine > 0.999, fmt("inner product %.4g, cosine %.9f", inner, cosine)};
  });

  // Task invariants.
  add("env.stationary_distribution", [](const StepTable&) {
    const TaskSpec task;
    const auto sampled = stationary_distribution_sampled(task, behavior_policy(task), 1'000'000, 3);
    const auto exact = stationary_distribution_analytic(task, behavior_policy(task));
    const double dev = (sampled.weights - exact.weights).lpNorm<Eigen::Infinity>();
    return CheckResult{dev <= 0.005, fmt("max deviation %.5f", dev)};
  });
  add("env.episode_length", [](const StepTable&) {
    const TaskSpec task;
    const Policy b = behavior_policy(task);
    detail::EpisodeSampler sampler(task, b, target_policy(task), 5);
    std::size_t steps = 0;
    std::size_t episodes = 0;
    while (episodes < 100'000) {
      ++steps;
      if (sampler.next().terminal()) ++episodes;
    }
    const double mean = static_cast<double>(steps) / static_cast<double>(episodes);
    return CheckResult{std::abs(mean - 35.0 / 8.0) <= 0.01 * 35.0 / 8.0, fmt("mean length %.4f", mean)};
  });
  add("env.reward_rule", [](const StepTable&) {
    const TaskSpec task;
    const auto stream = sample_state_stream(task, behavior_policy(task), target_policy(task), 50'000, 9);
    bool ok = true;
    for (const auto& t : stream) {
      const bool collision = t.state == task.num_states - 1 && t.action == Action::kForward;
      ok = ok && ((t.reward == 1.0) == collision) && (!collision || t.discount_next == 0.0);
    }
    return CheckResult{ok, ok ? "reward 1 exactly on forward from the last state" : "reward rule violated"};
  });
  add("env.ve_convexity", [](const StepTable&) {
    const TaskSpec task;
    const FeatureMap& fm = check_features();
    const auto mu = stationary_distribution_analytic(task, behavior_policy(task));
    const Vector v = true_values(task);
    Rng rng(21);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      Vector w1(fm.dim());
      Vector w2(fm.dim());
      for (Eigen::Index j = 0; j < fm.dim(); ++j) {
        w1(j) = 2.0 * rng.uniform() - 1.0;
        w2(j) = 2.0 * rng.uniform() - 1.0;
      }
      const double a = rng.uniform();
      const double lhs = ve(a * w1 + (1.0 - a) * w2, fm, mu, v);
      const double rhs = a * ve(w1, fm, mu, v) + (1.0 - a) * ve(w2, fm, mu, v);
      ok = ok && lhs <= rhs + 1e-12;
    }
    return CheckResult{ok, ok ? "convex on 200 random chords" : "convexity violated"};
  });
  add("env.initial_error", [](const StepTable&) {
    const TaskSpec task;
    const auto mu = stationary_distribution_analytic(task, behavior_policy(task));
    const double e = rve(Vector::Zero(6), check_features(), mu, true_values(task));
    return CheckResult{std::abs(e - 0.689) <= 0.001, fmt("RVE(0) %.6f", e)};
  });

  // Harness.
  add("harness.zero_step_size", [](const StepTable&) {
    ExperimentSetup setup;
    setup.steps = 300;
    setup.mu_samples = 20000;
    const auto data = prepare_runs(setup, 2, 0);
    const auto runs = execute_instance(make_config(Algorithm::kOffPolicyTd, 0.0, 0.5), data, setup.steps);
    bool ok = true;
    for (const auto& r : runs) {
      for (double e : r.rve) ok = ok && e == r.rve.front();
    }
    const auto agg = aggregate(runs);
    ok = ok && !agg.unstable;
    return CheckResult{ok, ok ? "error constant at its initial value" : "error moved with alpha = 0"};
  });
  add("harness.clamp", [](const StepTable&) {
    ExperimentSetup setup;
    setup.steps = 500;
    setup.mu_samples = 20000;
    const auto data = prepare_runs(setup, 2, 0);
    const auto runs = execute_instance(make_config(Algorithm::kOffPolicyTd, 1.0, 0.0), data, setup.steps);
    bool finite = true;
    for (const auto& r : runs) {
      for (double e : r.rve) finite = finite && std::isfinite(e);
      finite = finite && r.rve.back() <= kClampedError;
    }
    const auto agg = aggregate(runs);
    const bool ok = finite && agg.diverged_runs == runs.size() && agg.unstable;
    return CheckResult{ok, fmt("diverged runs %g, auc %.4g", static_cast<double>(agg.diverged_runs), agg.auc)};
  });
  add("harness.grid_sizes", [](const StepTable&) {
    std::size_t total = 0;
    for (Algorithm a : kAllAlgorithms) total += expand_grid(a).size();
    const bool ok = expand_grid(Algorithm::kGtd).size() == 3420 && expand_grid(Algorithm::kOffPolicyTd).size() == 228 &&
                    total == 16416;
    return CheckResult{ok, fmt("total instances %g", static_cast<double>(total))};
  });

  return checks;
}

struct VerificationReport {
  std::vector<std::pair<std::string, CheckResult>> results;

  bool all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.second.passed; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& r : results) {
      if (r.first == name) return &r.second;
    }
    return nullptr;
  }
};

/// Runs every check; exceptions count as failures. Prints one line per check when log is given.
inline VerificationReport run_verification(const StepTable& table = {}, std::ostream* log = nullptr) {
  VerificationReport report;
  for (const auto& check : verification_checks()) {
    CheckResult r;
    try {
      r = check.run(table);
    } catch (const std::exception& e) {
      r = CheckResult{false, std::string("threw: ") + e.what()};
    }
    if (log) *log << (r.passed ? "PASS " : "FAIL ") << check.name << ": " << r.detail << '\n';
    report.results.emplace_back(check.name, std::move(r));
  }
  return report;
}

}  // namespace offpolicy

#endif  // OFFPOLICY_VERIFY_HPP_

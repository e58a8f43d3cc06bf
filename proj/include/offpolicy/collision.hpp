#ifndef OFFPOLICY_COLLISION_HPP_
#define OFFPOLICY_COLLISION_HPP_

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "offpolicy/errors.hpp"
#include "offpolicy/random.hpp"

namespace offpolicy {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Action : std::uint8_t { kForward = 0, kTurnaway = 1 };

/*!
 * The Collision task: a vehicle on an eight-state track moving towards an
 * obstacle. States are indexed from 0 here (state s of the usual 1..8
 * numbering is index s-1).
 *
 *  - Episodes start uniformly in the first `num_start_states` states.
 *  - `forward` moves one state along; from the last state it crashes,
 *    yielding `collision_reward` and ending the episode.
 *  - `turnaway` exists only from `first_turnaway_state` on and ends the
 *    episode with reward 0.
 */
struct TaskSpec {
  int num_states = 8;
  int num_start_states = 4;
  int first_turnaway_state = 4;
  double discount = 0.9;
  double collision_reward = 1.0;

  bool turnaway_available(int state) const { return state >= first_turnaway_state; }
  bool is_last(int state) const { return state == num_states - 1; }
};

/// Per-state probability of `forward`; `turnaway` takes the remainder where available.
struct Policy {
  std::vector<double> forward;

  double prob(int state, Action a) const {
    const double f = forward[static_cast<std::size_t>(state)];
    return a == Action::kForward ? f : 1.0 - f;
  }
};

/// Fails with ConfigError unless every state's probabilities are valid for the task.
inline void validate_policy(const TaskSpec& task, const Policy& policy) {
  if (static_cast<int>(policy.forward.size()) != task.num_states) {
    throw ConfigError("policy must assign probabilities to every state");
  }
  for (int s = 0; s < task.num_states; ++s) {
    const double f = policy.forward[static_cast<std::size_t>(s)];
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("policy probability outside [0,1]");
    if (!task.turnaway_available(s) && std::abs(f - 1.0) > 1e-12) {
      throw ConfigError("policy uses turnaway in a state where only forward exists");
    }
  }
}

inline Policy behavior_policy(const TaskSpec& task) {
  Policy p;
  p.forward.resize(static_cast<std::size_t>(task.num_states));
  for (int s = 0; s < task.num_states; ++s) {
    p.forward[static_cast<std::size_t>(s)] = task.turnaway_available(s) ? 0.5 : 1.0;
  }
  return p;
}

inline Policy target_policy(const TaskSpec& task) {
  return Policy{std::vector<double>(static_cast<std::size_t>(task.num_states), 1.0)};
}

/// Binary feature rows, one per state; v(s, w) = w . row(s).
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(Matrix rows, int ones_per_row) : rows_(std::move(rows)), ones_per_row_(ones_per_row) {}

  Eigen::Index dim() const { return rows_.cols(); }
  Eigen::Index num_states() const { return rows_.rows(); }
  int ones_per_row() const { return ones_per_row_; }
  const Matrix& matrix() const { return rows_; }
  Vector row(int state) const { return rows_.row(state).transpose(); }

  bool operator==(const FeatureMap& other) const {
    return ones_per_row_ == other.ones_per_row_ && rows_ == other.rows_;
  }

 private:
  Matrix rows_;
  int ones_per_row_ = 0;
};

/// Each row is drawn independently and uniformly from the C(d, ones) binary
/// vectors with exactly `ones` entries set. Duplicate rows are allowed.
inline FeatureMap generate_feature_map(std::uint64_t seed, int d, int ones, int num_states = 8) {
  if (d <= 0 || ones <= 0 || ones >= d) {
    throw ConfigError("feature map requires 0 < ones < d (got d=" + std::to_string(d) +
                      ", ones=" + std::to_string(ones) + ")");
  }
  if (num_states <= 0) throw ConfigError("feature map requires at least one state");
  Rng rng(derive_seed(seed, SeedDomain::kFeatures));
  Matrix rows = Matrix::Zero(num_states, d);
  std::vector<int> slots(static_cast<std::size_t>(d));
  for (int s = 0; s < num_states; ++s) {
    std::iota(slots.begin(), slots.end(), 0);
    // Partial Fisher-Yates: the first `ones` slots form a uniform subset.
    for (int i = 0; i < ones; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(d - i)));
      std::swap(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]);
      rows(s, slots[static_cast<std::size_t>(i)]) = 1.0;
    }
  }
  return FeatureMap(std::move(rows), ones);
}

/// Tabular representation: state s activates feature s only.
inline FeatureMap one_hot_feature_map(int num_states = 8) {
  return FeatureMap(Matrix::Identity(num_states, num_states), 1);
}

/// One time step of experience. Termination is encoded by discount_next = 0
/// and an all-zero x_next.
struct Transition {
  Vector x;
  Action action = Action::kForward;
  double reward = 0.0;
  Vector x_next;
  double discount_next = 0.0;
  double pi = 1.0;
  double b = 1.0;
  double rho = 1.0;
};

/// State-level record of a behavior step; featurize() turns it into a Transition.
struct StateTransition {
  int state = 0;
  Action action = Action::kForward;
  double reward = 0.0;
  int next_state = -1;  // -1 on termination
  double discount_next = 0.0;
  double pi = 1.0;
  double b = 1.0;
  double rho = 1.0;

  bool terminal() const { return next_state < 0; }
};

namespace detail {

class EpisodeSampler {
 public:
  EpisodeSampler(const TaskSpec& task, const Policy& behavior, const Policy& target, std::uint64_t seed)
      : task_(task), behavior_(behavior), target_(target), rng_(seed) {
    state_ = start_state();
  }

  StateTransition next() {
    StateTransition t;
    t.state = state_;
    const double p_forward = behavior_.prob(state_, Action::kForward);
    const bool forward = !task_.turnaway_available(state_) || rng_.bernoulli(p_forward);
    t.action = forward ? Action::kForward : Action::kTurnaway;
    t.b = behavior_.prob(state_, t.action);
    t.pi = target_.prob(state_, t.action);
    t.rho = t.pi / t.b;
    if (forward && !task_.is_last(state_)) {
      t.next_state = state_ + 1;
      t.discount_next = task_.discount;
      state_ = t.next_state;
    } else {
      t.reward = forward ? task_.collision_reward : 0.0;
      t.next_state = -1;
      t.discount_next = 0.0;
      state_ = start_state();
    }
    return t;
  }

  int current_state() const { return state_; }

 private:
  int start_state() { return static_cast<int>(rng_.below(static_cast<std::uint64_t>(task_.num_start_states))); }

  const TaskSpec& task_;
  const Policy& behavior_;
  const Policy& target_;
  Rng rng_;
  int state_ = 0;
};

}  // namespace detail

/// `steps` behavior transitions with episodes chained back to back.
inline std::vector<StateTransition> sample_state_stream(const TaskSpec& task, const Policy& behavior,
                                                        const Policy& target, std::size_t steps,
                                                        std::uint64_t seed) {
  validate_policy(task, behavior);
  validate_policy(task, target);
  detail::EpisodeSampler sampler(task, behavior, target, derive_seed(seed, SeedDomain::kTrajectory));
  std::vector<StateTransition> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(sampler.next());
  return out;
}

inline Transition featurize(const StateTransition& st, const FeatureMap& fm) {
  Transition t;
  t.x = fm.row(st.state);
  t.action = st.action;
  t.reward = st.reward;
  t.x_next = st.terminal() ? Vector::Zero(fm.dim()) : fm.row(st.next_state);
  t.discount_next = st.discount_next;
  t.pi = st.pi;
  t.b = st.b;
  t.rho = st.rho;
  return t;
}

inline std::vector<Transition> featurize(const std::vector<StateTransition>& stream, const FeatureMap& fm) {
  std::vector<Transition> out;
  out.reserve(stream.size());
  for (const auto& st : stream) out.push_back(featurize(st, fm));
  return out;
}

inline std::vector<Transition> sample_stream(const TaskSpec& task, const Policy& behavior, const Policy& target,
                                             const FeatureMap& fm, std::size_t steps, std::uint64_t seed) {
  if (steps == 0) throw ConfigError("stream length must be positive");
  return featurize(sample_state_stream(task, behavior, target, steps, seed), fm);
}

/// v_pi(s) = gamma^(last - s) under the always-forward target policy.
inline Vector true_values(const TaskSpec& task) {
  Vector v(task.num_states);
  for (int s = 0; s < task.num_states; ++s) {
    v(s) = std::pow(task.discount, task.num_states - 1 - s);
  }
  return v;
}

/// Fraction of time steps spent in each state under the behavior policy.
struct StateDistribution {
  Vector weights;
};

inline StateDistribution stationary_distribution_sampled(const TaskSpec& task, const Policy& behavior,
                                                         std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("state distribution estimate needs at least one sample");
  validate_policy(task, behavior);
  const Policy target = target_policy(task);
  detail::EpisodeSampler sampler(task, behavior, target, derive_seed(seed, SeedDomain::kStateDistribution));
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(task.num_states), 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[static_cast<std::size_t>(sampler.current_state())];
    sampler.next();
  }
  StateDistribution mu{Vector(task.num_states)};
  for (int s = 0; s < task.num_states; ++s) {
    mu.weights(s) = static_cast<double>(counts[static_cast<std::size_t>(s)]) / static_cast<double>(n);
  }
  return mu;
}

/// Expected per-episode visit counts normalized by the expected episode length.
inline StateDistribution stationary_distribution_analytic(const TaskSpec& task, const Policy& behavior) {
  validate_policy(task, behavior);
  Vector visits = Vector::Zero(task.num_states);
  const double start = 1.0 / task.num_start_states;
  double carried = 0.0;
  for (int s = 0; s < task.num_states; ++s) {
    visits(s) = carried + (s < task.num_start_states ? start : 0.0);
    carried = task.is_last(s) ? 0.0 : visits(s) * behavior.prob(s, Action::kForward);
  }
  return StateDistribution{visits / visits.sum()};
}

}  // namespace offpolicy

#endif  // OFFPOLICY_COLLISION_HPP_

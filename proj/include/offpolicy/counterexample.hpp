#ifndef OFFPOLICY_COUNTEREXAMPLE_HPP_
#define OFFPOLICY_COUNTEREXAMPLE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "offpolicy/learners.hpp"

namespace offpolicy {

/*!
 * Two-state w -> 2w chain. One scalar feature: 1 in the left state, 2 in the
 * right state; reward 0, discount 1. The target policy always moves
 * left -> right -> left. The behavior realizes b(right | left) = 1/4 as a
 * fixed periodic pattern so every run is identical:
 *
 *   left -> left  (x3, target never takes it, rho = 0)
 *   left -> right (rho = 4)
 *   right -> left (rho = 1)
 *
 * The left state is over-represented relative to the target's distribution,
 * which makes semi-gradient off-policy TD grow w geometrically.
 */
inline std::vector<Transition> two_state_chain_stream(std::size_t steps) {
  const auto make = [](double x, double x_next, double pi, double b) {
    Transition t;
    t.x = Vector::Constant(1, x);
    t.x_next = Vector::Constant(1, x_next);
    t.reward = 0.0;
    t.discount_next = 1.0;
    t.pi = pi;
    t.b = b;
    t.rho = pi / b;
    return t;
  };
  const std::vector<Transition> cycle = {
      make(1.0, 1.0, 0.0, 0.75), make(1.0, 1.0, 0.0, 0.75), make(1.0, 1.0, 0.0, 0.75),
      make(1.0, 2.0, 1.0, 0.25), make(2.0, 1.0, 1.0, 1.0),
  };
  std::vector<Transition> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(cycle[i % cycle.size()]);
  return out;
}

struct WeightGrowth {
  double initial = 0.0;
  double peak = 0.0;            // max |w| seen
  double final = 0.0;           // |w| after the last step
  std::size_t steps_to_10x = 0; // 0 when |w| never reached 10x initial
};

/// Tracks |w| of a one-dimensional learner over the chain, starting from w = w0.
inline WeightGrowth track_weight_growth(const LearnerConfig& c, std::size_t steps, double w0 = 1.0) {
  LearnerState st = LearnerState::zeros(1);
  st.w(0) = w0;
  WeightGrowth g;
  g.initial = std::abs(w0);
  g.peak = g.initial;
  const auto stream = two_state_chain_stream(steps);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    step(st, stream[i], c);
    const double mag = std::abs(st.w(0));
    if (!std::isfinite(mag)) {
      g.peak = mag;
      if (g.steps_to_10x == 0) g.steps_to_10x = i + 1;
      break;
    }
    g.peak = std::max(g.peak, mag);
    if (g.steps_to_10x == 0 && mag >= 10.0 * g.initial) g.steps_to_10x = i + 1;
  }
  g.final = std::abs(st.w(0));
  return g;
}

}  // namespace offpolicy

#endif  // OFFPOLICY_COUNTEREXAMPLE_HPP_

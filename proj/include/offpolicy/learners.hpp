#ifndef OFFPOLICY_LEARNERS_HPP_
#define OFFPOLICY_LEARNERS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "offpolicy/collision.hpp"
#include "offpolicy/errors.hpp"

namespace offpolicy {

enum class Algorithm {
  kOffPolicyTd,
  kGtd,
  kGtd2,
  kHtd,
  kProximalGtd2,
  kTdrc,
  kEtd,
  kEtdBeta,
  kTreeBackup,
  kVtrace,
  kAbtd,
};

inline constexpr std::array<Algorithm, 11> kAllAlgorithms = {
    Algorithm::kOffPolicyTd, Algorithm::kGtd,  Algorithm::kGtd2,       Algorithm::kHtd,
    Algorithm::kProximalGtd2, Algorithm::kTdrc, Algorithm::kEtd,        Algorithm::kEtdBeta,
    Algorithm::kTreeBackup,  Algorithm::kVtrace, Algorithm::kAbtd,
};

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kOffPolicyTd: return "td";
    case Algorithm::kGtd: return "gtd";
    case Algorithm::kGtd2: return "gtd2";
    case Algorithm::kHtd: return "htd";
    case Algorithm::kProximalGtd2: return "proximal_gtd2";
    case Algorithm::kTdrc: return "tdrc";
    case Algorithm::kEtd: return "etd";
    case Algorithm::kEtdBeta: return "etd_beta";
    case Algorithm::kTreeBackup: return "tree_backup";
    case Algorithm::kVtrace: return "vtrace";
    case Algorithm::kAbtd: return "abtd";
  }
  return "unknown";
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  throw ConfigError("unknown algorithm id '" + std::string(name) + "'");
}

/// Gradient-TD family: learns a secondary weight vector with step size eta * alpha.
inline bool uses_eta(Algorithm a) {
  return a == Algorithm::kGtd || a == Algorithm::kGtd2 || a == Algorithm::kHtd ||
         a == Algorithm::kProximalGtd2 || a == Algorithm::kTdrc;
}
inline bool uses_lambda(Algorithm a) { return a != Algorithm::kAbtd; }
inline bool uses_beta(Algorithm a) { return a == Algorithm::kEtdBeta; }
inline bool uses_zeta(Algorithm a) { return a == Algorithm::kAbtd; }
inline bool uses_tdrc_reg(Algorithm a) { return a == Algorithm::kTdrc; }

/// Task-level constants for ABTD's nu: psi0 = 1 / max_{s,a} max(b, pi) and
/// psi_max = 1 / min_{s,a} max(b, pi), over available actions.
struct AbtdBounds {
  double psi0 = 1.0;
  double psi_max = 2.0;
};

inline AbtdBounds abtd_bounds(const TaskSpec& task, const Policy& behavior, const Policy& target) {
  double hi = 0.0;
  double lo = 1.0;
  for (int s = 0; s < task.num_states; ++s) {
    for (Action a : {Action::kForward, Action::kTurnaway}) {
      if (a == Action::kTurnaway && !task.turnaway_available(s)) continue;
      const double m = std::max(behavior.prob(s, a), target.prob(s, a));
      hi = std::max(hi, m);
      lo = std::min(lo, m);
    }
  }
  return AbtdBounds{1.0 / hi, 1.0 / lo};
}

/*!
 * One algorithm instance's parameters. Optional fields must be set exactly
 * when the algorithm uses them (see validate()); unset ones fall back to the
 * documented defaults only inside the step functions.
 */
struct LearnerConfig {
  Algorithm algorithm = Algorithm::kOffPolicyTd;
  double alpha = 0.0;
  std::optional<double> lambda;
  std::optional<double> eta;       // alpha_v = eta * alpha; TDRC default 1
  std::optional<double> beta;      // ETD(lambda, beta) followon decay
  std::optional<double> zeta;      // ABTD
  std::optional<double> tdrc_reg;  // TDRC regularization, default 1
  AbtdBounds abtd{};

  double lambda_or_zero() const { return lambda.value_or(0.0); }
  double secondary_step() const { return eta.value_or(1.0) * alpha; }
};

inline void validate(const LearnerConfig& c) {
  const Algorithm a = c.algorithm;
  const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw ConfigError("alpha must be finite and >= 0");
  if (c.lambda.has_value() != uses_lambda(a)) {
    throw ConfigError(std::string(algorithm_name(a)) + (uses_lambda(a) ? " requires lambda" : " takes no lambda"));
  }
  if (c.lambda && !in_unit(*c.lambda)) throw ConfigError("lambda must lie in [0,1]");
  if (c.eta && !uses_eta(a)) throw ConfigError(std::string(algorithm_name(a)) + " takes no eta");
  if (uses_eta(a) && a != Algorithm::kTdrc && !c.eta) {
    throw ConfigError(std::string(algorithm_name(a)) + " requires eta");
  }
  if (c.eta && !(*c.eta >= 0.0)) throw ConfigError("eta must be >= 0");
  if (c.beta.has_value() != uses_beta(a)) {
    throw ConfigError(std::string(algorithm_name(a)) + (uses_beta(a) ? " requires beta" : " takes no beta"));
  }
  if (c.beta && !in_unit(*c.beta)) throw ConfigError("beta must lie in [0,1]");
  if (c.zeta.has_value() != uses_zeta(a)) {
    throw ConfigError(std::string(algorithm_name(a)) + (uses_zeta(a) ? " requires zeta" : " takes no zeta"));
  }
  if (c.zeta && !in_unit(*c.zeta)) throw ConfigError("zeta must lie in [0,1]");
  if (c.tdrc_reg && !uses_tdrc_reg(a)) throw ConfigError(std::string(algorithm_name(a)) + " takes no tdrc_reg");
  if (c.tdrc_reg && !(*c.tdrc_reg >= 0.0)) throw ConfigError("tdrc_reg must be >= 0");
}

/*!
 * Everything a learner mutates. The previous-step caches start as if the
 * stream began at an episode boundary: discount_prev = 0 annihilates every
 * term that multiplies the other cached values.
 */
struct LearnerState {
  Vector w;
  Vector v;
  Vector z;
  Vector z_b;
  double followon = 0.0;

  double discount_prev = 0.0;
  double rho_prev = 1.0;
  double pi_prev = 1.0;
  double b_prev = 1.0;
  double nu_prev = 1.0;

  static LearnerState zeros(Eigen::Index d) {
    LearnerState s;
    s.w = Vector::Zero(d);
    s.v = Vector::Zero(d);
    s.z = Vector::Zero(d);
    s.z_b = Vector::Zero(d);
    return s;
  }

  bool finite() const {
    return w.allFinite() && v.allFinite() && z.allFinite() && z_b.allFinite() && std::isfinite(followon);
  }

  bool operator==(const LearnerState&) const = default;
};

struct StepOutcome {
  LearnerState state;
  double td_error = 0.0;
  bool finite = true;  // false signals divergence
};

inline double td_error(const Vector& w, const Transition& t) {
  return t.reward + t.discount_next * w.dot(t.x_next) - w.dot(t.x);
}

namespace detail {

inline void remember(LearnerState& st, const Transition& t) {
  st.discount_prev = t.discount_next;
  st.rho_prev = t.rho;
  st.pi_prev = t.pi;
  st.b_prev = t.b;
}

// z <- rho_t (gamma_t lambda z + scale x_t)
inline void accumulate_rho_trace(LearnerState& st, const Transition& t, double lambda, double scale = 1.0) {
  st.z = t.rho * (st.discount_prev * lambda * st.z + scale * t.x);
}

}  // namespace detail

/// Off-policy TD(lambda), importance ratio inside the trace.
inline double step_offpolicy_td(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double delta = td_error(st.w, t);
  detail::accumulate_rho_trace(st, t, c.lambda_or_zero());
  st.w += c.alpha * delta * st.z;
  detail::remember(st, t);
  return delta;
}

/// Off-policy TD(lambda) with the ratio on the update instead:
/// z <- rho_{t-1} gamma_t lambda z + x_t, w += alpha rho_t delta z.
/// Produces the same weights as step_offpolicy_td from zero traces.
inline double step_offpolicy_td_update_form(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double delta = td_error(st.w, t);
  st.z = st.rho_prev * st.discount_prev * c.lambda_or_zero() * st.z + t.x;
  st.w += c.alpha * t.rho * delta * st.z;
  detail::remember(st, t);
  return delta;
}

namespace detail {

// Shared by GTD and TDRC: w += alpha delta z - alpha gamma' (1 - lambda) (v.z) x'.
inline void gradient_corrected_w(LearnerState& st, const Transition& t, double alpha, double lambda, double delta,
                                 const Vector& v_old) {
  st.w += alpha * delta * st.z - alpha * t.discount_next * (1.0 - lambda) * v_old.dot(st.z) * t.x_next;
}

}  // namespace detail

inline double step_gtd(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double lambda = c.lambda_or_zero();
  const double delta = td_error(st.w, t);
  detail::accumulate_rho_trace(st, t, lambda);
  const Vector v_old = st.v;
  st.v += c.secondary_step() * (delta * st.z - v_old.dot(t.x) * t.x);
  detail::gradient_corrected_w(st, t, c.alpha, lambda, delta, v_old);
  detail::remember(st, t);
  return delta;
}

inline double step_gtd2(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double lambda = c.lambda_or_zero();
  const double delta = td_error(st.w, t);
  detail::accumulate_rho_trace(st, t, lambda);
  const Vector v_old = st.v;
  st.v += c.secondary_step() * (delta * st.z - v_old.dot(t.x) * t.x);
  st.w += c.alpha * v_old.dot(t.x) * t.x - c.alpha * t.discount_next * (1.0 - lambda) * v_old.dot(st.z) * t.x_next;
  detail::remember(st, t);
  return delta;
}

/*!
 * Proximal GTD2(lambda), extragradient form. A half step from (v, w) gives
 * (v_half, w_half); the TD error is re-evaluated at w_half and the final
 * step is taken from the original (v, w) using v_half and delta_half.
 * A single importance-weighted trace serves all four sub-updates.
 */
inline double step_proximal_gtd2(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double lambda = c.lambda_or_zero();
  const double alpha = c.alpha;
  const double alpha_v = c.secondary_step();
  const double correction = alpha * t.discount_next * (1.0 - lambda);

  const double delta = td_error(st.w, t);
  detail::accumulate_rho_trace(st, t, lambda);

  const Vector v_half = st.v + alpha_v * (delta * st.z - st.v.dot(t.x) * t.x);
  const Vector w_half = st.w + alpha * st.v.dot(t.x) * t.x - correction * st.v.dot(st.z) * t.x_next;
  const double delta_half = td_error(w_half, t);

  st.v += alpha_v * (delta_half * st.z - v_half.dot(t.x) * t.x);
  st.w += alpha * v_half.dot(t.x) * t.x - correction * v_half.dot(st.z) * t.x_next;
  detail::remember(st, t);
  return delta;
}

/// HTD(lambda): off-policy trace z plus the on-policy trace z_b.
inline double step_htd(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double lambda = c.lambda_or_zero();
  const double delta = td_error(st.w, t);
  detail::accumulate_rho_trace(st, t, lambda);
  st.z_b = st.discount_prev * lambda * st.z_b + t.x;
  const Vector td_direction = t.x - t.discount_next * t.x_next;
  const Vector v_old = st.v;
  st.v += c.secondary_step() * (delta * st.z - td_direction * v_old.dot(st.z_b));
  st.w += c.alpha * (delta * st.z + td_direction * (st.z - st.z_b).dot(v_old));
  detail::remember(st, t);
  return delta;
}

inline double step_tdrc(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double lambda = c.lambda_or_zero();
  const double reg = c.tdrc_reg.value_or(1.0);
  const double alpha_v = c.secondary_step();
  const double delta = td_error(st.w, t);
  detail::accumulate_rho_trace(st, t, lambda);
  const Vector v_old = st.v;
  st.v += alpha_v * (delta * st.z - v_old.dot(t.x) * t.x) - alpha_v * reg * v_old;
  detail::gradient_corrected_w(st, t, c.alpha, lambda, delta, v_old);
  detail::remember(st, t);
  return delta;
}

struct Emphasis {
  double followon = 0.0;
  double emphasis = 0.0;
};

/// F = rho_prev * decay * F_prev + 1, M = lambda + (1 - lambda) F (interest fixed at 1).
inline Emphasis emphasis_update(double followon_prev, double rho_prev, double decay, double lambda) {
  const double f = rho_prev * decay * followon_prev + 1.0;
  return Emphasis{f, lambda + (1.0 - lambda) * f};
}

namespace detail {

inline double emphatic_step(LearnerState& st, const Transition& t, const LearnerConfig& c, double decay) {
  const double lambda = c.lambda_or_zero();
  const double delta = td_error(st.w, t);
  const Emphasis e = emphasis_update(st.followon, st.rho_prev, decay, lambda);
  st.followon = e.followon;
  accumulate_rho_trace(st, t, lambda, e.emphasis);
  st.w += c.alpha * delta * st.z;
  remember(st, t);
  return delta;
}

}  // namespace detail

inline double step_etd(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  return detail::emphatic_step(st, t, c, st.discount_prev);
}

/// ETD(lambda, beta): beta replaces gamma_t as the followon decay. The
/// followon still restarts at episode boundaries (gamma_t = 0).
inline double step_etd_beta(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double decay = st.discount_prev > 0.0 ? c.beta.value_or(0.0) : 0.0;
  return detail::emphatic_step(st, t, c, decay);
}

inline double step_tree_backup(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double delta = td_error(st.w, t);
  st.z = st.discount_prev * c.lambda_or_zero() * st.pi_prev * st.z + t.x;
  st.w += c.alpha * (t.rho * delta) * st.z;
  detail::remember(st, t);
  return delta;
}

/// Vtrace(lambda) with trace cap c = 1 and no cap on the update ratio.
inline double step_vtrace(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double delta = td_error(st.w, t);
  st.z = st.discount_prev * std::min(1.0, st.rho_prev) * c.lambda_or_zero() * st.z + t.x;
  st.w += c.alpha * t.rho * delta * st.z;
  detail::remember(st, t);
  return delta;
}

inline double abtd_psi(double zeta, const AbtdBounds& bounds) {
  return 2.0 * zeta * bounds.psi0 + std::max(0.0, 2.0 * zeta - 1.0) * (bounds.psi_max - 2.0 * bounds.psi0);
}

/// nu = min(psi(zeta), 1 / max(b_t, pi_t)).
inline double abtd_nu(double zeta, double b, double pi, const AbtdBounds& bounds) {
  return std::min(abtd_psi(zeta, bounds), 1.0 / std::max(b, pi));
}

inline double abtd_nu(double zeta, double b, double pi, const TaskSpec& task, const Policy& behavior,
                      const Policy& target) {
  return abtd_nu(zeta, b, pi, abtd_bounds(task, behavior, target));
}

inline double step_abtd(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  const double delta = td_error(st.w, t);
  st.z = st.discount_prev * st.nu_prev * st.pi_prev * st.z + t.x;
  st.w += c.alpha * (t.rho * delta) * st.z;
  st.nu_prev = abtd_nu(c.zeta.value_or(0.0), t.b, t.pi, c.abtd);
  detail::remember(st, t);
  return delta;
}

/// Dispatches on c.algorithm; updates st in place and returns the TD error.
inline double step(LearnerState& st, const Transition& t, const LearnerConfig& c) {
  switch (c.algorithm) {
    case Algorithm::kOffPolicyTd: return step_offpolicy_td(st, t, c);
    case Algorithm::kGtd: return step_gtd(st, t, c);
    case Algorithm::kGtd2: return step_gtd2(st, t, c);
    case Algorithm::kHtd: return step_htd(st, t, c);
    case Algorithm::kProximalGtd2: return step_proximal_gtd2(st, t, c);
    case Algorithm::kTdrc: return step_tdrc(st, t, c);
    case Algorithm::kEtd: return step_etd(st, t, c);
    case Algorithm::kEtdBeta: return step_etd_beta(st, t, c);
    case Algorithm::kTreeBackup: return step_tree_backup(st, t, c);
    case Algorithm::kVtrace: return step_vtrace(st, t, c);
    case Algorithm::kAbtd: return step_abtd(st, t, c);
  }
  throw ConfigError("unhandled algorithm");
}

/// Value-semantics wrapper over step().
inline StepOutcome advance(LearnerState st, const Transition& t, const LearnerConfig& c) {
  const double delta = step(st, t, c);
  const bool ok = st.finite();
  return StepOutcome{std::move(st), delta, ok};
}

}  // namespace offpolicy

#endif  // OFFPOLICY_LEARNERS_HPP_

#ifndef OFFPOLICY_GRID_HPP_
#define OFFPOLICY_GRID_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <tuple>
#include <vector>

#include "offpolicy/learners.hpp"

namespace offpolicy {

/// One point of the sweep: an algorithm together with all its parameters.
using InstanceSpec = LearnerConfig;

/// alpha = 2^-x, x in {0..18}, ascending.
inline std::vector<double> standard_alphas() {
  std::vector<double> out;
  for (int x = 18; x >= 0; --x) out.push_back(std::ldexp(1.0, -x));
  return out;
}

/// {0, .1, .2, .3, .5, .9, 1} and 1 - 2^-x for x in {2..6}, ascending.
inline std::vector<double> standard_lambdas() {
  std::vector<double> out = {0.0, 0.1, 0.2, 0.3, 0.5, 0.9, 1.0};
  for (int x = 2; x <= 6; ++x) out.push_back(1.0 - std::ldexp(1.0, -x));
  std::sort(out.begin(), out.end());
  return out;
}

/// eta = 2^x, x in {-6..8}, ascending.
inline std::vector<double> standard_etas() {
  std::vector<double> out;
  for (int x = -6; x <= 8; ++x) out.push_back(std::ldexp(1.0, x));
  return out;
}

inline std::vector<double> standard_betas() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}; }

/// Alternative 19-point zeta grid, k/18 for k = 0..18.
inline std::vector<double> zeta_values_extended() {
  std::vector<double> out;
  for (int k = 0; k <= 18; ++k) out.push_back(k / 18.0);
  return out;
}

struct ParameterGrid {
  std::vector<double> alphas = standard_alphas();
  std::vector<double> lambdas = standard_lambdas();
  std::vector<double> etas = standard_etas();
  std::vector<double> betas = standard_betas();
  std::vector<double> zetas = standard_lambdas();
};

/// Full cross product for one algorithm, ordered by (lambda|zeta, eta|beta, alpha).
inline std::vector<InstanceSpec> expand_grid(Algorithm algorithm, const ParameterGrid& grid = {},
                                             const AbtdBounds& abtd = {}) {
  std::vector<InstanceSpec> out;
  const auto& outer = uses_zeta(algorithm) ? grid.zetas : grid.lambdas;
  std::vector<double> extras = {0.0};
  if (uses_eta(algorithm) && algorithm != Algorithm::kTdrc) extras = grid.etas;
  if (uses_beta(algorithm)) extras = grid.betas;

  for (double o : outer) {
    for (double extra : extras) {
      for (double alpha : grid.alphas) {
        InstanceSpec s;
        s.algorithm = algorithm;
        s.alpha = alpha;
        s.abtd = abtd;
        if (uses_zeta(algorithm)) {
          s.zeta = o;
        } else {
          s.lambda = o;
        }
        if (algorithm == Algorithm::kTdrc) {
          s.eta = 1.0;
          s.tdrc_reg = 1.0;
        } else if (uses_eta(algorithm)) {
          s.eta = extra;
        }
        if (uses_beta(algorithm)) s.beta = extra;
        out.push_back(s);
      }
    }
  }
  return out;
}

/// Ordering used for tie-breaking: smaller alpha first, then lambda, eta, beta, zeta.
inline bool parameter_less(const InstanceSpec& a, const InstanceSpec& b) {
  const auto key = [](const InstanceSpec& s) {
    return std::make_tuple(s.alpha, s.lambda.value_or(-1.0), s.eta.value_or(-1.0), s.beta.value_or(-1.0),
                           s.zeta.value_or(-1.0));
  };
  return key(a) < key(b);
}

/// Value of the bootstrapping-like parameter: lambda, or zeta for ABTD.
inline double trace_parameter(const InstanceSpec& s) {
  return s.zeta ? *s.zeta : s.lambda.value_or(0.0);
}

/// 17 significant digits, round-trippable.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// File-name-safe identifier, e.g. "gtd_alpha0.015625_lambda0.5_eta0.25".
inline std::string instance_key(const InstanceSpec& s) {
  std::string key(algorithm_name(s.algorithm));
  key += "_alpha" + format_real(s.alpha);
  if (s.lambda) key += "_lambda" + format_real(*s.lambda);
  if (s.eta && s.algorithm != Algorithm::kTdrc) key += "_eta" + format_real(*s.eta);
  if (s.beta) key += "_beta" + format_real(*s.beta);
  if (s.zeta) key += "_zeta" + format_real(*s.zeta);
  return key;
}

}  // namespace offpolicy

#endif  // OFFPOLICY_GRID_HPP_

#ifndef OFFPOLICY_VALUE_ERROR_HPP_
#define OFFPOLICY_VALUE_ERROR_HPP_

#include <Eigen/Dense>

#include <cmath>

#include "offpolicy/collision.hpp"

namespace offpolicy {

/// Distribution-weighted squared value error: sum_s mu(s) (w . x(s) - v(s))^2.
inline double ve(const Vector& w, const FeatureMap& fm, const StateDistribution& mu, const Vector& v) {
  const Matrix& x = fm.matrix();
  double total = 0.0;
  for (Eigen::Index s = 0; s < x.rows(); ++s) {
    const double err = x.row(s).dot(w) - v(s);
    total += mu.weights(s) * err * err;
  }
  return total;
}

inline double rve(const Vector& w, const FeatureMap& fm, const StateDistribution& mu, const Vector& v) {
  return std::sqrt(ve(w, fm, mu, v));
}

/// Weight vector minimizing ve(). Rank-deficient weighted Gram matrices get
/// the minimum-norm minimizer.
inline Vector solve_wstar(const FeatureMap& fm, const StateDistribution& mu, const Vector& v) {
  const Vector sqrt_mu = mu.weights.cwiseSqrt();
  const Matrix weighted = sqrt_mu.asDiagonal() * fm.matrix();
  const Vector target = sqrt_mu.cwiseProduct(v);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(weighted);
  return cod.solve(target);
}

}  // namespace offpolicy

#endif  // OFFPOLICY_VALUE_ERROR_HPP_

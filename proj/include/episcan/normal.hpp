// Standard-normal CDF/quantile helpers used by tests and simulation.
#pragma once

#include <cmath>

namespace episcan {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Two-sided p-value of a standard-normal z: 2*(1 - Phi(|z|)).
inline double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// Inverse of normal_cdf, accurate to full double precision (Newton-refined).
double normal_quantile(double p);

}  // namespace episcan

#include "episcan/dist.hpp"

#include <cmath>

#include "episcan/errors.hpp"
#include "episcan/normal.hpp"

namespace episcan {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw_error(ErrorCode::InvalidInput, "normal_quantile needs p in (0,1)");
  // Hastings-style initial guess, then Newton on Phi(x) - p.
  bool lower = p < 0.5;
  double pp = lower ? p : 1.0 - p;
  double t = std::sqrt(-2.0 * std::log(pp));
  double x = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
  if (lower) x = -x;
  for (int i = 0; i < 4; ++i) {
    double err = normal_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x -= err / pdf;
  }
  return x;
}

}  // namespace episcan

namespace episcan::dist {

double uniform(rng::Stream& s, double lo, double hi) {
  if (!(lo <= hi)) throw_error(ErrorCode::InvalidRange, "uniform: lo > hi");
  return lo + (hi - lo) * s.next_double();
}

double normal(rng::Stream& s) {
  for (;;) {
    double u = 2.0 * s.next_double() - 1.0;
    double v = 2.0 * s.next_double() - 1.0;
    double r2 = u * u + v * v;
    if (r2 >= 1.0 || r2 == 0.0) continue;
    return u * std::sqrt(-2.0 * std::log(r2) / r2);
  }
}

bool bernoulli(rng::Stream& s, double p) { return s.next_double() < p; }

int binomial2(rng::Stream& s, double p) {
  double u = s.next_double();
  double q = 1.0 - p;
  double p0 = q * q;
  if (u < p0) return 0;
  if (u < p0 + 2.0 * p * q) return 1;
  return 2;
}

namespace {

long poisson_knuth(rng::Stream& s, double mean) {
  double limit = std::exp(-mean);
  long k = 0;
  double prod = s.next_double();
  while (prod > limit) {
    ++k;
    prod *= s.next_double();
  }
  return k;
}

// Hormann (1993), transformed rejection with squeeze (PTRS).
long poisson_ptrs(rng::Stream& s, double mean) {
  double b = 0.931 + 2.53 * std::sqrt(mean);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  double log_mean = std::log(mean);
  for (;;) {
    double u = s.next_double() - 0.5;
    double v = s.next_double();
    double us = 0.5 - std::fabs(u);
    double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mean - mean - std::lgamma(k + 1.0))
      return static_cast<long>(k);
  }
}

}  // namespace

long poisson(rng::Stream& s, double mean) {
  if (!(mean >= 0.0)) throw_error(ErrorCode::InvalidRange, "poisson: mean < 0");
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_knuth(s, mean) : poisson_ptrs(s, mean);
}

}  // namespace episcan::dist

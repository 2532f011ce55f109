#include "episcan/simulate.hpp"

#include <cmath>

#include "episcan/dist.hpp"
#include "episcan/errors.hpp"
#include "episcan/normal.hpp"

namespace episcan::sim {

namespace {

void validate_independent(const IndependentGenotypeSpec& s) {
  if (s.n < 1 || s.p < 1)
    throw_error(ErrorCode::InvalidRange, "genotypes: need n, p >= 1");
  if (!(s.maf_low > 0.0 && s.maf_low <= s.maf_high && s.maf_high <= 0.5))
    throw_error(ErrorCode::InvalidRange,
                "genotypes: need 0 < maf_low <= maf_high <= 0.5");
  if (s.causal_count != 0 && s.causal_count != 2)
    throw_error(ErrorCode::InvalidRange, "genotypes: causal_count must be 0 or 2");
  if (s.causal_count == 2) {
    if (s.p < 2) throw_error(ErrorCode::InvalidRange, "genotypes: causal needs p >= 2");
    if (!(s.causal_maf > 0.0 && s.causal_maf <= 0.5))
      throw_error(ErrorCode::InvalidRange, "genotypes: causal_maf in (0, 0.5]");
  }
}

double gaussian_density_2d(double h, double k, double r) {
  double om = 1.0 - r * r;
  return std::exp(-(h * h - 2.0 * r * h * k + k * k) / (2.0 * om)) /
         (2.0 * M_PI * std::sqrt(om));
}

double simpson(double h, double k, double a, double b, int level, double fa,
               double fm, double fb, double whole) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = gaussian_density_2d(h, k, lm), frm = gaussian_density_2d(h, k, rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (level <= 0 || std::fabs(left + right - whole) < 1e-14)
    return left + right;
  return simpson(h, k, a, m, level - 1, fa, flm, fm, left) +
         simpson(h, k, m, b, level - 1, fm, frm, fb, right);
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw_error(ErrorCode::InvalidRange, "bivariate_normal_cdf: |rho| < 1");
  // Plackett: Phi2(h,k;rho) = Phi(h) Phi(k) + int_0^rho phi2(h,k;r) dr
  double base = normal_cdf(h) * normal_cdf(k);
  if (rho == 0.0) return base;
  double a = 0.0, b = rho;
  double fa = gaussian_density_2d(h, k, a), fb = gaussian_density_2d(h, k, b);
  double m = 0.5 * (a + b);
  double fm = gaussian_density_2d(h, k, m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return base + simpson(h, k, a, b, 24, fa, fm, fb, whole);
}

double solve_latent_correlation(double maf1, double maf2, double target) {
  if (!(maf1 > 0.0 && maf1 < 1.0 && maf2 > 0.0 && maf2 < 1.0))
    throw_error(ErrorCode::InvalidRange, "solve_latent_correlation: maf in (0,1)");
  if (!(target > -1.0 && target < 1.0))
    throw_error(ErrorCode::InvalidRange, "solve_latent_correlation: |target| < 1");
  double tau1 = normal_quantile(maf1), tau2 = normal_quantile(maf2);
  double denom = std::sqrt(maf1 * (1.0 - maf1) * maf2 * (1.0 - maf2));
  auto allele_corr = [&](double r) {
    return (bivariate_normal_cdf(tau1, tau2, r) - maf1 * maf2) / denom;
  };
  double lo = -0.999, hi = 0.999;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (allele_corr(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

GenotypeMatrix simulate_genotypes_independent(const IndependentGenotypeSpec& spec,
                                              rng::Stream& rng) {
  validate_independent(spec);
  std::size_t n = spec.n, p = spec.p;
  std::vector<double> data(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    bool causal = spec.causal_count == 2 && j < 2;
    double maf = causal ? spec.causal_maf
                        : dist::uniform(rng, spec.maf_low, spec.maf_high);
    double* col = data.data() + j * n;
    for (std::size_t i = 0; i < n; ++i)
      col[i] = static_cast<double>(dist::binomial2(rng, maf));
  }
  return GenotypeMatrix(n, p, std::move(data));
}

GenotypeMatrix simulate_genotypes_correlated(const CorrelatedGenotypeSpec& spec,
                                             rng::Stream& rng) {
  if (spec.n < 1 || spec.p < 2)
    throw_error(ErrorCode::InvalidRange, "genotypes: need n >= 1, p >= 2");
  if (!(std::fabs(spec.block_rho) < 1.0))
    throw_error(ErrorCode::InvalidRange, "genotypes: |block_rho| < 1");
  if (!(spec.maf_low > 0.0 && spec.maf_low <= spec.maf_high && spec.maf_high <= 0.5))
    throw_error(ErrorCode::InvalidRange,
                "genotypes: need 0 < maf_low <= maf_high <= 0.5");
  if (!(spec.causal_maf1 > 0.0 && spec.causal_maf1 < 1.0 &&
        spec.causal_maf2 > 0.0 && spec.causal_maf2 < 1.0))
    throw_error(ErrorCode::InvalidRange, "genotypes: causal mafs in (0,1)");

  std::size_t n = spec.n, p = spec.p;

  // Column MAFs and their latent thresholds. Columns 0 and 1 are the causal
  // block; the AR(1) chain covers columns 2..p-1.
  std::vector<double> maf(p), tau(p);
  maf[0] = spec.causal_maf1;
  maf[1] = spec.causal_maf2;
  for (std::size_t j = 2; j < p; ++j)
    maf[j] = dist::uniform(rng, spec.maf_low, spec.maf_high);
  for (std::size_t j = 0; j < p; ++j) tau[j] = normal_quantile(maf[j]);

  double causal_latent = solve_latent_correlation(spec.causal_maf1,
                                                  spec.causal_maf2,
                                                  spec.causal_rho);
  double causal_mix = std::sqrt(1.0 - causal_latent * causal_latent);
  double rho = spec.block_rho;
  double ar_mix = std::sqrt(1.0 - rho * rho);

  std::vector<double> data(n * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int hap = 0; hap < 2; ++hap) {
      double u = dist::normal(rng);
      double v = dist::normal(rng);
      if (u < tau[0]) data[0 * n + i] += 1.0;
      double g1 = causal_latent * u + causal_mix * v;
      if (g1 < tau[1]) data[1 * n + i] += 1.0;
      double g = dist::normal(rng);
      for (std::size_t j = 2; j < p; ++j) {
        if (j > 2) g = rho * g + ar_mix * dist::normal(rng);
        if (g < tau[j]) data[j * n + i] += 1.0;
      }
    }
  }
  return GenotypeMatrix(n, p, std::move(data));
}

Outcome simulate_phenotype(const GenotypeMatrix& geno, const PhenotypeSpec& spec,
                           rng::Stream& rng) {
  std::size_t n = geno.n();
  if (spec.causal_a >= geno.p() || spec.causal_b >= geno.p() ||
      spec.causal_a == spec.causal_b)
    throw_error(ErrorCode::InvalidRange, "phenotype: bad causal pair");

  const double* x1 = geno.col(spec.causal_a);
  const double* x2 = geno.col(spec.causal_b);
  std::vector<double> eta(n);
  for (std::size_t i = 0; i < n; ++i)
    eta[i] = spec.beta1 * x1[i] + spec.beta2 * x2[i] + spec.beta3 * x1[i] * x2[i];

  switch (spec.family) {
    case ModelFamily::Linear: {
      if (!(spec.error_sd >= 0.0))
        throw_error(ErrorCode::InvalidRange, "phenotype: error_sd >= 0");
      ContinuousOutcome out;
      out.y.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        out.y[i] = eta[i] + spec.error_sd * dist::normal(rng);
      return out;
    }
    case ModelFamily::Logistic: {
      BinaryOutcome out;
      out.y.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double prob = 1.0 / (1.0 + std::exp(-eta[i]));
        out.y[i] = dist::bernoulli(rng, prob) ? 1.0 : 0.0;
      }
      return out;
    }
    case ModelFamily::Poisson: {
      if (!(spec.offset_low > 0.0 && spec.offset_low <= spec.offset_high))
        throw_error(ErrorCode::InvalidRange, "phenotype: bad offset range");
      CountOutcome out;
      out.y.resize(n);
      out.offset.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double t = dist::uniform(rng, spec.offset_low, spec.offset_high);
        out.offset[i] = t;
        out.y[i] = static_cast<double>(dist::poisson(rng, t * std::exp(eta[i])));
      }
      return out;
    }
    case ModelFamily::Cox: {
      if (!(spec.weibull_shape > 0.0 && spec.weibull_scale > 0.0))
        throw_error(ErrorCode::InvalidRange, "phenotype: bad weibull parameters");
      if (!(spec.censor_q_low > 0.0 && spec.censor_q_low <= spec.censor_q_high &&
            spec.censor_q_high < 1.0))
        throw_error(ErrorCode::InvalidRange, "phenotype: bad censoring window");
      double inv_shape = 1.0 / spec.weibull_shape;
      auto baseline_quantile = [&](double q) {
        return spec.weibull_scale * std::pow(-std::log(1.0 - q), inv_shape);
      };
      double c_lo = baseline_quantile(spec.censor_q_low);
      double c_hi = baseline_quantile(spec.censor_q_high);
      SurvivalOutcome out;
      out.time.resize(n);
      out.event.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double u = rng.next_double();
        double event_time =
            spec.weibull_scale *
            std::pow(-std::log(u) * std::exp(-eta[i]), inv_shape);
        double censor_time = dist::uniform(rng, c_lo, c_hi);
        out.event[i] = event_time <= censor_time ? 1 : 0;
        out.time[i] = out.event[i] ? event_time : censor_time;
      }
      return out;
    }
  }
  throw_error(ErrorCode::InvalidRange, "phenotype: unknown family");
}

}  // namespace episcan::sim

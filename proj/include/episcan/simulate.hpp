// Synthetic genotype and phenotype generators for the simulation studies.
// Everything is a pure function of its parameters and the RNG stream.
#pragma once

#include <cstddef>

#include "episcan/genotype.hpp"
#include "episcan/outcome.hpp"
#include "episcan/rng.hpp"

namespace episcan::sim {

struct IndependentGenotypeSpec {
  std::size_t n = 0, p = 0;
  double maf_low = 0.1, maf_high = 0.5;
  double causal_maf = 0.2;
  int causal_count = 0;  // 0 or 2; causal markers occupy columns 0 and 1
};

// Each non-causal column draws its MAF once from U[maf_low, maf_high], then
// entries i.i.d. Binomial(2, MAF).
GenotypeMatrix simulate_genotypes_independent(const IndependentGenotypeSpec& spec,
                                              rng::Stream& rng);

struct CorrelatedGenotypeSpec {
  std::size_t n = 0, p = 0;
  double block_rho = 0.7;  // lag-1 correlation of the latent AR(1) process
  double causal_rho = 0.3; // target allele-count correlation of the causal pair
  double causal_maf1 = 0.48, causal_maf2 = 0.25;
  double maf_low = 0.1, maf_high = 0.5;
};

// Latent-Gaussian AR(1) copula per haplotype, thresholded per column at the
// quantile matching its MAF and summed over two haplotypes. Columns 0 and 1
// form a separate bivariate block whose latent correlation is solved so the
// allele-count correlation hits causal_rho.
GenotypeMatrix simulate_genotypes_correlated(const CorrelatedGenotypeSpec& spec,
                                             rng::Stream& rng);

struct PhenotypeSpec {
  ModelFamily family = ModelFamily::Linear;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
  std::size_t causal_a = 0, causal_b = 1;
  double error_sd = 1.0;                        // linear
  double offset_low = 1.0, offset_high = 5.0;   // poisson
  double weibull_shape = 2.0, weibull_scale = 1.0;
  double censor_q_low = 0.70, censor_q_high = 0.99;
};

// Linear:  Y = b1 x1 + b2 x2 + b3 x1 x2 + sd * N(0,1)
// Logistic: Y ~ Bernoulli(expit(eta))
// Poisson: t ~ U[offset_low, offset_high], Y ~ Poisson(t exp(eta))
// Cox: event times inverse-transformed from the Weibull baseline, censoring
//      uniform between the baseline quantiles censor_q_low..censor_q_high.
Outcome simulate_phenotype(const GenotypeMatrix& geno, const PhenotypeSpec& spec,
                           rng::Stream& rng);

// P(X < h, Y < k) for standard bivariate normal with correlation rho
// (Plackett's identity, adaptive quadrature). Used by the copula generator.
double bivariate_normal_cdf(double h, double k, double rho);

// Latent correlation r such that thresholding a bivariate normal at the
// quantiles of (maf1, maf2) yields Bernoulli correlation `target`.
double solve_latent_correlation(double maf1, double maf2, double target);

}  // namespace episcan::sim

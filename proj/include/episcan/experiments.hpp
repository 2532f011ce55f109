// Monte-Carlo harnesses: FWER under the full null, power of the two-stage
// scan, empirical independence of the stage-1/stage-2 statistics, and the
// marginal-screening study. Replicates run on disjoint RNG streams keyed by
// absolute replicate index, so pooled runs reproduce a single larger run.
#pragma once

#include <cstdint>
#include <vector>

#include "episcan/outcome.hpp"
#include "episcan/two_stage.hpp"

namespace episcan::xp {

enum class MarkerMode { Independent, Correlated };
enum class MainEffects { None, Both, Opposite };

const char* marker_mode_name(MarkerMode m);
const char* main_effects_name(MainEffects m);

struct StudyConfig {
  ModelFamily family = ModelFamily::Linear;
  std::size_t n = 500;
  std::size_t p = 200;
  std::size_t replicates = 500;
  std::uint64_t seed = 0;
  std::size_t replicate_offset = 0;  // absolute index of the first replicate
  unsigned threads = 1;

  double alpha = 0.05;
  std::vector<double> fst = {0.05};  // first-stage thresholds, one cell each
  K1Mode k1_mode = K1Mode::Observed;
  QualityConfig quality;

  MarkerMode markers = MarkerMode::Independent;
  double maf_low = 0.1, maf_high = 0.5;
  double causal_maf = 0.2;
  double block_rho = 0.7;   // correlated surrogate lag-1 latent correlation
  double causal_rho = 0.3;  // correlated causal-pair target correlation
  double causal_maf1 = 0.48, causal_maf2 = 0.25;
};

struct FwerCell {
  double fst = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  std::size_t rejections = 0;
  std::size_t replicates = 0;
};

struct FwerReport {
  StudyConfig config;
  std::vector<FwerCell> cells;
};

// Full-null study (beta1 = beta2 = beta3 = 0 by construction). Independent
// markers are re-simulated per replicate; the correlated surrogate is drawn
// once and held fixed, mirroring the use of a fixed real dataset.
FwerReport estimate_fwer(const StudyConfig& config);

struct PowerConfig {
  StudyConfig base;
  std::vector<double> beta3_grid;  // default 0, 0.05, ..., 1
  MainEffects main_effects = MainEffects::None;
  double main_effect_size = 0.5;
};

std::vector<double> default_beta3_grid();

struct PowerCell {
  double fst = 0.0;
  double beta3 = 0.0;
  double power = 0.0;
  double se = 0.0;
  std::size_t successes = 0;
  std::size_t replicates = 0;
};

struct PowerReport {
  PowerConfig config;
  std::vector<PowerCell> cells;  // fst-major, beta3-minor
};

// Fraction of replicates in which the causal pair itself is significant in
// stage 2 after the Bonferroni correction.
PowerReport power_curve(const PowerConfig& config);

struct IndependenceConfig {
  ModelFamily family = ModelFamily::Linear;
  std::size_t n = 1000;
  std::size_t replicates = 2000;
  std::uint64_t seed = 0;
  std::size_t replicate_offset = 0;
  unsigned threads = 1;
  double maf_low = 0.1, maf_high = 0.5;
};

struct IndependenceReport {
  IndependenceConfig config;
  // Statistics recorded per replicate: T_k^S1 (marker in the pair),
  // T_j^S1 (marker outside the pair), T_kl^S2 (interaction of the pair).
  double corr_s1k_s2 = 0.0;   // pairwise, j = k
  double corr_s1j_s2 = 0.0;   // mixed pairwise, j not in {k, l}
  double corr_s1k_s1j = 0.0;  // two stage-1 statistics
  double mardia_skewness = 0.0;  // joint-normality diagnostics of the triple
  double mardia_kurtosis = 0.0;
  std::size_t replicates_used = 0;
};

// Full-null triple-statistic study on three independent standardized
// markers: k = 0, l = 1 form the stage-2 pair, j = 2 is the outside marker.
IndependenceReport independence_check(const IndependenceConfig& config);

struct MarginalConfig {
  ModelFamily family = ModelFamily::Linear;
  std::size_t n = 2000;
  double beta_min = -1.0, beta_max = 1.0, beta_step = 0.002;
  double marker_maf = 0.3;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct MarginalRow {
  double beta3 = 0.0;
  double z = 0.0;  // NaN when the marginal fit failed
};

struct MarginalReport {
  MarginalConfig config;
  std::vector<MarginalRow> rows;
};

// One dataset per grid value of the interaction effect; records the stage-1
// Wald statistic of the first causal marker in the marginal model.
MarginalReport marginal_scan_study(const MarginalConfig& config);

}  // namespace episcan::xp

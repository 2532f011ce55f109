// The two-stage interaction scan: stage 1 screens every marker marginally,
// stage 2 tests the interaction for every pair of surviving markers with a
// Bonferroni correction over the tests actually performed.
#pragma once

#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "episcan/genotype.hpp"
#include "episcan/glm.hpp"
#include "episcan/outcome.hpp"

namespace episcan {

enum class K1Mode { Observed, Deterministic };

struct QualityConfig {
  double r2_max = 0.9;
  double min_variance = 1e-8;
  double min_maf = 0.0;
};

struct ScanConfig {
  ModelFamily family = ModelFamily::Linear;
  double alpha = 0.05;
  // Scalar alpha_1 applied to every marker, or one threshold per marker.
  std::variant<double, std::vector<double>> stage1_threshold = 0.05;
  // Fixed covariates included in every model, never tested (column-major,
  // n x n_fixed).
  std::vector<double> fixed_covariates;
  std::size_t n_fixed = 0;
  QualityConfig quality;
  K1Mode k1_mode = K1Mode::Observed;
  // Center and scale marker columns (and build the interaction from the
  // scaled columns) before fitting; used by the independence experiments.
  bool standardize = false;
  unsigned threads = 1;
  glm::ConvergenceControl control;

  double threshold_for(std::size_t marker) const;
};

enum class QualityFlag : std::uint8_t {
  Ok,
  LowVariance,
  LowMaf,
  PairCollinear,
  ProductCollinear,
  FitFailed,
};

const char* quality_flag_name(QualityFlag f);

struct QualityCheck {
  bool pass = true;
  QualityFlag reason = QualityFlag::Ok;
};

struct MarkerScreen {
  std::uint32_t index = 0;
  double z = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double threshold = 1.0;
  bool passed = false;
  QualityFlag flag = QualityFlag::Ok;
};

struct ScreenResult {
  std::vector<MarkerScreen> markers;     // one per marker, in marker order
  std::vector<std::uint32_t> selected;   // the set K, ascending
  // Number of stage-2 pairs surviving the pair quality filter; known once
  // stage 2 enumerates them (0 until then).
  std::size_t k1 = 0;
};

struct PairRecord {
  std::uint32_t k = 0, l = 0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double z = std::numeric_limits<double>::quiet_NaN();
  double raw_p = std::numeric_limits<double>::quiet_NaN();
  double corrected_p = std::numeric_limits<double>::quiet_NaN();
  bool significant = false;
  QualityFlag flag = QualityFlag::Ok;

  bool tested() const { return flag == QualityFlag::Ok; }
};

struct ScanReport {
  ScreenResult screen;
  std::vector<PairRecord> pairs;  // lexicographic by (k, l)
  std::size_t k1_effective = 0;
  double alpha2 = std::numeric_limits<double>::quiet_NaN();
  bool any_rejection = false;
};

// Total function: never throws for k != l; first failing rule wins, checked
// in the order variance, MAF, pair collinearity, product collinearity.
QualityCheck quality_check(const GenotypeMatrix& geno, std::size_t k,
                           std::size_t l, const QualityConfig& config);

ScreenResult stage_one_screen(const GenotypeMatrix& geno, const Outcome& outcome,
                              const ScanConfig& config);

ScanReport stage_two_scan(const GenotypeMatrix& geno, const Outcome& outcome,
                          const ScreenResult& screen, const ScanConfig& config);

ScanReport run_two_stage(const GenotypeMatrix& geno, const Outcome& outcome,
                         const ScanConfig& config);

// Single-model building blocks behind the two stages, shared with the
// experiment harnesses. They fit exactly the models the scan fits.
struct ModelStat {
  bool ok = false;
  QualityFlag flag = QualityFlag::Ok;  // FitFailed when !ok
  glm::WaldTest wald;                  // valid when ok
};

ModelStat stage_one_statistic(const GenotypeMatrix& geno, const Outcome& outcome,
                              const ScanConfig& config, std::size_t marker);
ModelStat stage_two_statistic(const GenotypeMatrix& geno, const Outcome& outcome,
                              const ScanConfig& config, std::size_t k,
                              std::size_t l);

}  // namespace episcan

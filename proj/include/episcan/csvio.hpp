// File formats: genotype/phenotype/covariate CSV readers and writers plus
// report serialization. All real values are written with 17 significant
// digits so identical runs produce byte-identical files and doubles
// round-trip exactly.
#pragma once

#include <string>
#include <vector>

#include "episcan/experiments.hpp"
#include "episcan/genotype.hpp"
#include "episcan/outcome.hpp"
#include "episcan/two_stage.hpp"

namespace episcan::io {

std::string format_double(double v);

// Header row of marker names, then one row per individual with {0,1,2}
// entries. Parse errors name the offending line and column.
GenotypeMatrix read_genotype_csv(const std::string& path);
void write_genotype_csv(const std::string& path, const GenotypeMatrix& geno);

struct CovariateData {
  std::size_t n = 0, m = 0;
  std::vector<double> data;  // column-major
  std::vector<std::string> names;
};

CovariateData read_covariates_csv(const std::string& path, std::size_t expected_rows);

// Columns by family: linear/logistic "y"; poisson "y,offset";
// cox "time,event".
Outcome read_phenotype_csv(const std::string& path, ModelFamily family);
void write_phenotype_csv(const std::string& path, const Outcome& outcome);

// Per-marker thresholds, one value per line (no header).
std::vector<double> read_threshold_file(const std::string& path);

void write_screen_csv(const std::string& path, const ScreenResult& screen);
void write_pairs_csv(const std::string& path, const ScanReport& report);

void write_fwer_csv(const std::string& path, const xp::FwerReport& report);
void write_power_csv(const std::string& path, const xp::PowerReport& report);
void write_independence_csv(const std::string& path,
                            const xp::IndependenceReport& report);
void write_marginal_csv(const std::string& path, const xp::MarginalReport& report);

}  // namespace episcan::io

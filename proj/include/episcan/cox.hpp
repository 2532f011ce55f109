// Cox proportional-hazards fitting by Newton-Raphson on the log partial
// likelihood. Ties are handled with the Breslow approximation; a subject is
// at risk at its own event time (Y_i(t) = 1{T_i >= t}).
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "episcan/glm.hpp"  // ConvergenceControl, FitResult, WaldTest
#include "episcan/linalg.hpp"

namespace episcan::cox {

using glm::ConvergenceControl;
using glm::FitResult;
using glm::WaldTest;

// Covariates are column-major n x q with no intercept column (it is absorbed
// in the baseline hazard).
struct SurvivalData {
  std::size_t n = 0, q = 0;
  std::vector<double> time;
  std::vector<std::uint8_t> event;
  std::vector<double> x;

  double* col(std::size_t j) { return x.data() + j * n; }
  const double* col(std::size_t j) const { return x.data() + j * n; }
};

// Running risk-set sums at one event time: S0 = sum of exp(eta) over the
// risk set, S1 its covariate-weighted version, S2 the matrix version.
struct RiskSetAccumulators {
  double s0 = 0.0;
  std::vector<double> s1;
  linalg::SymMat s2;
};

// Ascending time; events precede censorings at identical times.
std::vector<std::uint32_t> sort_order(const SurvivalData& data);

FitResult fit_cox(const SurvivalData& data, const ConvergenceControl& control = {});
FitResult fit_cox(const SurvivalData& data, const std::vector<std::uint32_t>& order,
                  const ConvergenceControl& control = {});

WaldTest cox_wald_test(const FitResult& fit, std::size_t coef_index);

// Log partial likelihood / score at an arbitrary beta, without the fitter's
// validation (so degenerate inputs can still be evaluated in tests).
double log_partial_likelihood(const SurvivalData& data, std::span<const double> beta);
std::vector<double> partial_score(const SurvivalData& data, std::span<const double> beta);

}  // namespace episcan::cox

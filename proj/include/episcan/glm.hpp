// Maximum-likelihood fitting of the supported GLM families (Gaussian,
// logistic, Poisson with offset) and Wald tests on single coefficients.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "episcan/linalg.hpp"

namespace episcan::glm {

enum class FamilyTag { Gaussian, Logistic, PoissonOffset };

struct Family {
  FamilyTag tag = FamilyTag::Gaussian;

  static Family gaussian() { return {FamilyTag::Gaussian}; }
  static Family logistic() { return {FamilyTag::Logistic}; }
  static Family poisson_offset() { return {FamilyTag::PoissonOffset}; }
};

enum class ColumnRole { Intercept, Fixed, Tested, Interaction };

// Column-major design matrix. Column 0 is the all-ones intercept.
class DesignMatrix {
public:
  DesignMatrix() = default;
  DesignMatrix(std::size_t n, std::size_t q, std::vector<ColumnRole> roles);

  void resize(std::size_t n, std::size_t q, std::vector<ColumnRole> roles);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return q_; }

  double* col(std::size_t j) { return data_.data() + j * n_; }
  const double* col(std::size_t j) const { return data_.data() + j * n_; }

  ColumnRole role(std::size_t j) const { return roles_[j]; }
  const std::vector<ColumnRole>& roles() const { return roles_; }

  void fill_intercept();

  // Dimension and intercept checks (n >= q+1, column 0 all ones when its
  // role says so). Column-variance requirements are enforced upstream by the
  // quality gates and, failing that, surface as SingularDesign in the fit.
  void validate() const;

private:
  std::size_t n_ = 0, q_ = 0;
  std::vector<double> data_;
  std::vector<ColumnRole> roles_;
};

struct ConvergenceControl {
  double tol = 1e-8;              // max-norm of the score at the optimum
  double loglik_rel_tol = 1e-12;  // relative log-likelihood stall
  int max_iter = 50;
  int max_step_halvings = 10;
  double separation_beta = 15.0;  // |beta_j| beyond this at the cap
  double condition_warn = 1e12;
};

struct FitResult {
  std::vector<double> beta;
  linalg::SymMat cov;  // estimated covariance of beta
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<double> sigma2;  // Gaussian residual variance, RSS/(n-q)
  bool separation_suspected = false;
  bool ill_conditioned = false;
  double condition = 0.0;
};

struct WaldTest {
  double estimate = 0.0;
  double std_err = 0.0;
  double z = 0.0;
  double p_value = 1.0;
};

FitResult fit_glm(const DesignMatrix& design, std::span<const double> y,
                  Family family, std::span<const double> offsets = {},
                  const ConvergenceControl& control = {});

// Two-sided test of beta[coef_index] = 0 against the standard normal.
WaldTest wald_test(const FitResult& fit, std::size_t coef_index);

// Likelihood machinery at an arbitrary beta; used by the property tests.
double log_likelihood(const DesignMatrix& design, std::span<const double> y,
                      Family family, std::span<const double> offsets,
                      std::span<const double> beta);
std::vector<double> score(const DesignMatrix& design, std::span<const double> y,
                          Family family, std::span<const double> offsets,
                          std::span<const double> beta);
linalg::SymMat observed_information(const DesignMatrix& design,
                                    std::span<const double> y, Family family,
                                    std::span<const double> offsets,
                                    std::span<const double> beta);

}  // namespace episcan::glm

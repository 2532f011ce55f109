#include "episcan/glm.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "episcan/errors.hpp"
#include "episcan/kernels.hpp"
#include "episcan/normal.hpp"

namespace episcan::glm {

namespace ker = episcan::kernels;

DesignMatrix::DesignMatrix(std::size_t n, std::size_t q,
                           std::vector<ColumnRole> roles) {
  resize(n, q, std::move(roles));
}

void DesignMatrix::resize(std::size_t n, std::size_t q,
                          std::vector<ColumnRole> roles) {
  if (roles.size() != q)
    throw_error(ErrorCode::InvalidInput, "design: one role per column required");
  n_ = n;
  q_ = q;
  roles_ = std::move(roles);
  data_.assign(n * q, 0.0);
  if (q_ > 0 && roles_[0] == ColumnRole::Intercept) fill_intercept();
}

void DesignMatrix::fill_intercept() {
  double* c = col(0);
  for (std::size_t i = 0; i < n_; ++i) c[i] = 1.0;
}

void DesignMatrix::validate() const {
  if (q_ == 0 || n_ < q_ + 1)
    throw_error(ErrorCode::InvalidInput,
                "design: need n >= q+1 observations");
  for (std::size_t j = 0; j < q_; ++j) {
    if ((roles_[j] == ColumnRole::Intercept) != (j == 0))
      throw_error(ErrorCode::InvalidInput,
                  "design: intercept must be column 0 and only column 0");
  }
  if (roles_[0] == ColumnRole::Intercept) {
    const double* c = col(0);
    for (std::size_t i = 0; i < n_; ++i)
      if (c[i] != 1.0)
        throw_error(ErrorCode::InvalidInput, "design: intercept column not 1");
  }
}

namespace {

void validate_response(const DesignMatrix& x, std::span<const double> y,
                       Family family, std::span<const double> offsets) {
  if (y.size() != x.rows())
    throw_error(ErrorCode::InvalidInput, "fit_glm: y length != design rows");
  bool wants_offsets = family.tag == FamilyTag::PoissonOffset;
  if (wants_offsets && offsets.size() != y.size())
    throw_error(ErrorCode::InvalidInput,
                "fit_glm: PoissonOffset requires one offset per observation");
  if (!wants_offsets && !offsets.empty())
    throw_error(ErrorCode::InvalidInput,
                "fit_glm: offsets only valid for PoissonOffset");
  for (std::size_t i = 0; i < y.size(); ++i) {
    double v = y[i];
    switch (family.tag) {
      case FamilyTag::Gaussian:
        if (!std::isfinite(v))
          throw_error(ErrorCode::InvalidResponse, "gaussian y must be finite");
        break;
      case FamilyTag::Logistic:
        if (v != 0.0 && v != 1.0)
          throw_error(ErrorCode::InvalidResponse, "logistic y must be 0/1");
        break;
      case FamilyTag::PoissonOffset:
        if (!(v >= 0.0) || std::floor(v) != v)
          throw_error(ErrorCode::InvalidResponse,
                      "poisson y must be a non-negative integer");
        if (!(offsets[i] > 0.0))
          throw_error(ErrorCode::InvalidResponse, "poisson offsets must be > 0");
        break;
    }
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// eta = X beta (+ log offset for Poisson)
void linear_predictor(const DesignMatrix& x, std::span<const double> beta,
                      const std::vector<double>& log_offsets,
                      std::vector<double>& eta) {
  std::size_t n = x.rows();
  eta.assign(n, 0.0);
  if (!log_offsets.empty())
    for (std::size_t i = 0; i < n; ++i) eta[i] = log_offsets[i];
  for (std::size_t j = 0; j < x.cols(); ++j)
    ker::axpy(eta.data(), beta[j], x.col(j), n);
}

double softplus(double eta) {
  // log(1 + e^eta), stable on both tails
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

struct IrlsState {
  std::vector<double> eta, mu, w, resid;
  double loglik = 0.0;
};

void evaluate_family(const DesignMatrix& x, std::span<const double> y,
                     Family family, const std::vector<double>& log_offsets,
                     std::span<const double> beta, double loglik_const,
                     IrlsState& st) {
  std::size_t n = x.rows();
  linear_predictor(x, beta, log_offsets, st.eta);
  st.mu.resize(n);
  st.w.resize(n);
  st.resid.resize(n);
  double ll = 0.0;
  if (family.tag == FamilyTag::Logistic) {
    for (std::size_t i = 0; i < n; ++i) {
      double e = st.eta[i];
      double m = 1.0 / (1.0 + std::exp(-e));
      st.mu[i] = m;
      st.w[i] = m * (1.0 - m);
      st.resid[i] = y[i] - m;
      ll += y[i] * e - softplus(e);
    }
  } else {  // PoissonOffset
    for (std::size_t i = 0; i < n; ++i) {
      double e = st.eta[i];
      double m = std::exp(e);
      st.mu[i] = m;
      st.w[i] = m;
      st.resid[i] = y[i] - m;
      ll += y[i] * e - m;
    }
  }
  st.loglik = ll + loglik_const;
}

linalg::SymMat weighted_crossprod(const DesignMatrix& x,
                                  const std::vector<double>& w) {
  std::size_t q = x.cols(), n = x.rows();
  linalg::SymMat xtwx(q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a; b < q; ++b)
      xtwx.set_symmetric(a, b, ker::dot3(w.data(), x.col(a), x.col(b), n));
  return xtwx;
}

FitResult fit_gaussian(const DesignMatrix& x, std::span<const double> y,
                       const ConvergenceControl& control) {
  std::size_t n = x.rows(), q = x.cols();
  linalg::SymMat xtx(q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a; b < q; ++b)
      xtx.set_symmetric(a, b, ker::dot(x.col(a), x.col(b), n));
  std::vector<double> xty(q);
  for (std::size_t a = 0; a < q; ++a) xty[a] = ker::dot(x.col(a), y.data(), n);

  linalg::SymMat l;
  if (!linalg::cholesky(xtx, l))
    throw_error(ErrorCode::SingularDesign, "X'X not positive definite");

  FitResult fit;
  fit.beta = linalg::chol_solve(l, xty);
  linalg::SymMat xtx_inv = linalg::chol_inverse(l);
  fit.condition = linalg::condition_1norm(xtx, xtx_inv);
  fit.ill_conditioned = fit.condition > control.condition_warn;

  std::vector<double> resid(y.begin(), y.end());
  for (std::size_t j = 0; j < q; ++j)
    ker::axpy(resid.data(), -fit.beta[j], x.col(j), n);
  double rss = ker::dot(resid.data(), resid.data(), n);
  double sigma2 = rss / static_cast<double>(n - q);
  fit.sigma2 = sigma2;

  fit.cov = linalg::SymMat(q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) fit.cov(a, b) = sigma2 * xtx_inv(a, b);

  double mle_var = rss / static_cast<double>(n);
  fit.loglik = mle_var > 0.0
                   ? -0.5 * static_cast<double>(n) *
                         (std::log(2.0 * M_PI * mle_var) + 1.0)
                   : std::numeric_limits<double>::infinity();
  fit.iterations = 0;
  fit.converged = true;
  return fit;
}

FitResult fit_irls(const DesignMatrix& x, std::span<const double> y,
                   Family family, std::span<const double> offsets,
                   const ConvergenceControl& control) {
  std::size_t n = x.rows(), q = x.cols();
  std::vector<double> log_offsets;
  double loglik_const = 0.0;
  if (family.tag == FamilyTag::PoissonOffset) {
    log_offsets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      log_offsets[i] = std::log(offsets[i]);
      loglik_const -= std::lgamma(y[i] + 1.0);
    }
  }

  FitResult fit;
  fit.beta.assign(q, 0.0);
  IrlsState st;
  evaluate_family(x, y, family, log_offsets, fit.beta, loglik_const, st);

  std::vector<double> grad(q);
  auto compute_score = [&]() {
    for (std::size_t j = 0; j < q; ++j)
      grad[j] = ker::dot(st.resid.data(), x.col(j), n);
  };
  compute_score();

  std::vector<double> beta_try(q);
  IrlsState st_try;
  linalg::SymMat l;
  int iter = 0;
  while (iter < control.max_iter) {
    ++iter;
    linalg::SymMat info = weighted_crossprod(x, st.w);
    if (!linalg::cholesky(info, l))
      throw_error(ErrorCode::SingularDesign,
                  "Fisher information not positive definite");
    std::vector<double> step = linalg::chol_solve(l, grad);

    double scale = 1.0;
    double ll_old = st.loglik;
    for (int h = 0;; ++h) {
      for (std::size_t j = 0; j < q; ++j)
        beta_try[j] = fit.beta[j] + scale * step[j];
      evaluate_family(x, y, family, log_offsets, beta_try, loglik_const, st_try);
      if (st_try.loglik >= ll_old || h >= control.max_step_halvings) break;
      scale *= 0.5;
    }
    fit.beta = beta_try;
    std::swap(st, st_try);
    compute_score();

    if (max_abs(grad) < control.tol) break;
    double denom = std::fabs(st.loglik) + 1.0;
    if (std::fabs(st.loglik - ll_old) < control.loglik_rel_tol * denom) break;
  }

  fit.iterations = iter;
  fit.converged = max_abs(grad) < control.tol;
  if (!fit.converged && family.tag == FamilyTag::Logistic &&
      max_abs(fit.beta) > control.separation_beta)
    fit.separation_suspected = true;
  fit.loglik = st.loglik;

  linalg::SymMat info = weighted_crossprod(x, st.w);
  if (!linalg::cholesky(info, l))
    throw_error(ErrorCode::SingularDesign,
                "Fisher information not positive definite at optimum");
  fit.cov = linalg::chol_inverse(l);
  fit.condition = linalg::condition_1norm(info, fit.cov);
  fit.ill_conditioned = fit.condition > control.condition_warn;
  return fit;
}

}  // namespace

FitResult fit_glm(const DesignMatrix& design, std::span<const double> y,
                  Family family, std::span<const double> offsets,
                  const ConvergenceControl& control) {
  design.validate();
  validate_response(design, y, family, offsets);
  if (family.tag == FamilyTag::Gaussian)
    return fit_gaussian(design, y, control);
  return fit_irls(design, y, family, offsets, control);
}

WaldTest wald_test(const FitResult& fit, std::size_t coef_index) {
  if (coef_index >= fit.beta.size())
    throw_error(ErrorCode::InvalidInput, "wald_test: coefficient out of range");
  double var = fit.cov(coef_index, coef_index);
  if (!(var > 0.0) || !std::isfinite(var)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "wald_test: variance of beta[%zu] is %g",
                  coef_index, var);
    throw_error(ErrorCode::DegenerateVariance, buf);
  }
  WaldTest t;
  t.estimate = fit.beta[coef_index];
  t.std_err = std::sqrt(var);
  t.z = t.estimate / t.std_err;
  t.p_value = normal_two_sided_p(t.z);
  return t;
}

double log_likelihood(const DesignMatrix& design, std::span<const double> y,
                      Family family, std::span<const double> offsets,
                      std::span<const double> beta) {
  std::size_t n = design.rows();
  std::vector<double> log_offsets;
  double loglik_const = 0.0;
  if (family.tag == FamilyTag::PoissonOffset) {
    log_offsets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      log_offsets[i] = std::log(offsets[i]);
      loglik_const -= std::lgamma(y[i] + 1.0);
    }
  }
  if (family.tag == FamilyTag::Gaussian) {
    std::vector<double> eta;
    linear_predictor(design, beta, log_offsets, eta);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - eta[i];
      rss += r * r;
    }
    double mle_var = rss / static_cast<double>(n);
    return mle_var > 0.0 ? -0.5 * static_cast<double>(n) *
                               (std::log(2.0 * M_PI * mle_var) + 1.0)
                         : std::numeric_limits<double>::infinity();
  }
  IrlsState st;
  evaluate_family(design, y, family, log_offsets, beta, loglik_const, st);
  return st.loglik;
}

std::vector<double> score(const DesignMatrix& design, std::span<const double> y,
                          Family family, std::span<const double> offsets,
                          std::span<const double> beta) {
  std::size_t n = design.rows(), q = design.cols();
  std::vector<double> log_offsets;
  if (family.tag == FamilyTag::PoissonOffset) {
    log_offsets.resize(n);
    for (std::size_t i = 0; i < n; ++i) log_offsets[i] = std::log(offsets[i]);
  }
  if (family.tag == FamilyTag::Gaussian)
    throw_error(ErrorCode::InvalidInput,
                "score: defined for logistic/poisson fits only");
  IrlsState st;
  evaluate_family(design, y, family, log_offsets, beta, 0.0, st);
  std::vector<double> g(q);
  for (std::size_t j = 0; j < q; ++j)
    g[j] = ker::dot(st.resid.data(), design.col(j), n);
  return g;
}

linalg::SymMat observed_information(const DesignMatrix& design,
                                    std::span<const double> y, Family family,
                                    std::span<const double> offsets,
                                    std::span<const double> beta) {
  std::size_t n = design.rows();
  std::vector<double> log_offsets;
  if (family.tag == FamilyTag::PoissonOffset) {
    log_offsets.resize(n);
    for (std::size_t i = 0; i < n; ++i) log_offsets[i] = std::log(offsets[i]);
  }
  if (family.tag == FamilyTag::Gaussian)
    throw_error(ErrorCode::InvalidInput,
                "observed_information: defined for logistic/poisson fits only");
  IrlsState st;
  evaluate_family(design, y, family, log_offsets, beta, 0.0, st);
  return weighted_crossprod(design, st.w);
}

}  // namespace episcan::glm

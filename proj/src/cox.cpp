#include "episcan/cox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "episcan/errors.hpp"
#include "episcan/kernels.hpp"

namespace episcan::cox {

namespace ker = episcan::kernels;

std::vector<std::uint32_t> sort_order(const SurvivalData& data) {
  std::vector<std::uint32_t> order(data.n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     if (data.time[a] != data.time[b])
                       return data.time[a] < data.time[b];
                     return data.event[a] > data.event[b];
                   });
  return order;
}

namespace {

void validate(const SurvivalData& data) {
  if (data.n == 0 || data.q == 0)
    throw_error(ErrorCode::InvalidInput, "fit_cox: empty data");
  if (data.time.size() != data.n || data.event.size() != data.n ||
      data.x.size() != data.n * data.q)
    throw_error(ErrorCode::InvalidInput, "fit_cox: inconsistent dimensions");
  std::size_t events = 0;
  for (std::size_t i = 0; i < data.n; ++i) {
    if (!(data.time[i] > 0.0))
      throw_error(ErrorCode::InvalidInput, "fit_cox: times must be positive");
    events += data.event[i] ? 1 : 0;
  }
  if (events == 0) throw_error(ErrorCode::NoEvents, "fit_cox: no observed events");
  if (events < data.q + 1)
    throw_error(ErrorCode::InvalidInput, "fit_cox: need events >= q+1");
  for (std::size_t j = 0; j < data.q; ++j) {
    const double* c = data.col(j);
    double mean = ker::sum(c, data.n) / static_cast<double>(data.n);
    double ss = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      double d = c[i] - mean;
      ss += d * d;
    }
    if (!(ss > 0.0))
      throw_error(ErrorCode::NoInformation,
                  "fit_cox: covariate column has zero variance");
  }
}

// One sweep over the risk sets in descending time order. Computes the log
// partial likelihood, and optionally the score and observed information, at
// the given eta = X beta (columns already centered by the caller).
struct SweepResult {
  double loglik = 0.0;
  std::vector<double> score;
  linalg::SymMat info;
};

void risk_set_sweep(const SurvivalData& data,
                    const std::vector<std::uint32_t>& order,
                    const std::vector<double>& eta, bool with_derivatives,
                    SweepResult& out) {
  std::size_t n = data.n, q = data.q;
  out.loglik = 0.0;
  if (with_derivatives) {
    out.score.assign(q, 0.0);
    out.info = linalg::SymMat(q);
  }
  RiskSetAccumulators acc;
  acc.s1.assign(q, 0.0);
  acc.s2 = linalg::SymMat(q);
  std::vector<double> ratio(q);

  // Walk descending; at a tie group first admit every subject with that
  // time to the risk set, then credit each event in the group (Breslow).
  std::size_t g_end = n;  // one past the group's last position in `order`
  while (g_end > 0) {
    std::size_t g_begin = g_end;
    double t = data.time[order[g_end - 1]];
    while (g_begin > 0 && data.time[order[g_begin - 1]] == t) --g_begin;

    for (std::size_t pos = g_begin; pos < g_end; ++pos) {
      std::uint32_t i = order[pos];
      double w = std::exp(eta[i]);
      acc.s0 += w;
      for (std::size_t a = 0; a < q; ++a) {
        double xa = data.col(a)[i];
        acc.s1[a] += w * xa;
        if (with_derivatives)
          for (std::size_t b = a; b < q; ++b) {
            double v = acc.s2(a, b) + w * xa * data.col(b)[i];
            acc.s2.set_symmetric(a, b, v);
          }
      }
    }

    double log_s0 = std::log(acc.s0);
    for (std::size_t pos = g_begin; pos < g_end; ++pos) {
      std::uint32_t i = order[pos];
      if (!data.event[i]) continue;
      out.loglik += eta[i] - log_s0;
      if (with_derivatives) {
        for (std::size_t a = 0; a < q; ++a) {
          ratio[a] = acc.s1[a] / acc.s0;
          out.score[a] += data.col(a)[i] - ratio[a];
        }
        for (std::size_t a = 0; a < q; ++a)
          for (std::size_t b = a; b < q; ++b) {
            double v = out.info(a, b) + acc.s2(a, b) / acc.s0 -
                       ratio[a] * ratio[b];
            out.info.set_symmetric(a, b, v);
          }
      }
    }
    g_end = g_begin;
  }
}

void compute_eta(const SurvivalData& data, const std::vector<double>& col_means,
                 std::span<const double> beta, std::vector<double>& eta) {
  std::size_t n = data.n;
  eta.assign(n, 0.0);
  for (std::size_t j = 0; j < data.q; ++j) ker::axpy(eta.data(), beta[j], data.col(j), n);
  if (!col_means.empty()) {
    double shift = 0.0;
    for (std::size_t j = 0; j < data.q; ++j) shift += beta[j] * col_means[j];
    for (std::size_t i = 0; i < n; ++i) eta[i] -= shift;
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

FitResult fit_cox(const SurvivalData& data, const ConvergenceControl& control) {
  return fit_cox(data, sort_order(data), control);
}

FitResult fit_cox(const SurvivalData& data,
                  const std::vector<std::uint32_t>& order,
                  const ConvergenceControl& control) {
  validate(data);
  std::size_t q = data.q;

  // Center covariates via the linear predictor; the partial likelihood is
  // invariant and exp() stays in range on near-separated data.
  std::vector<double> col_means(q);
  for (std::size_t j = 0; j < q; ++j)
    col_means[j] = ker::sum(data.col(j), data.n) / static_cast<double>(data.n);

  FitResult fit;
  fit.beta.assign(q, 0.0);
  std::vector<double> eta;
  SweepResult cur;
  compute_eta(data, col_means, fit.beta, eta);
  risk_set_sweep(data, order, eta, true, cur);

  std::vector<double> beta_try(q);
  SweepResult next;
  linalg::SymMat l;
  int iter = 0;
  while (iter < control.max_iter) {
    ++iter;
    if (!linalg::cholesky(cur.info, l))
      throw_error(ErrorCode::SingularInformation,
                  "partial-likelihood information not positive definite");
    std::vector<double> step = linalg::chol_solve(l, cur.score);

    double scale = 1.0;
    double ll_old = cur.loglik;
    for (int h = 0;; ++h) {
      for (std::size_t j = 0; j < q; ++j)
        beta_try[j] = fit.beta[j] + scale * step[j];
      compute_eta(data, col_means, beta_try, eta);
      risk_set_sweep(data, order, eta, true, next);
      if (next.loglik >= ll_old || h >= control.max_step_halvings) break;
      scale *= 0.5;
    }
    fit.beta = beta_try;
    std::swap(cur, next);

    if (max_abs(cur.score) < control.tol) break;
    double denom = std::fabs(cur.loglik) + 1.0;
    if (std::fabs(cur.loglik - ll_old) < control.loglik_rel_tol * denom) break;
  }

  fit.iterations = iter;
  fit.converged = max_abs(cur.score) < control.tol;
  if (!fit.converged && max_abs(fit.beta) > control.separation_beta)
    fit.separation_suspected = true;
  fit.loglik = cur.loglik;

  if (!linalg::cholesky(cur.info, l))
    throw_error(ErrorCode::SingularInformation,
                "partial-likelihood information not positive definite at optimum");
  fit.cov = linalg::chol_inverse(l);
  fit.condition = linalg::condition_1norm(cur.info, fit.cov);
  fit.ill_conditioned = fit.condition > control.condition_warn;
  return fit;
}

WaldTest cox_wald_test(const FitResult& fit, std::size_t coef_index) {
  return glm::wald_test(fit, coef_index);
}

double log_partial_likelihood(const SurvivalData& data,
                              std::span<const double> beta) {
  std::vector<double> eta;
  compute_eta(data, {}, beta, eta);
  SweepResult r;
  risk_set_sweep(data, sort_order(data), eta, false, r);
  return r.loglik;
}

std::vector<double> partial_score(const SurvivalData& data,
                                  std::span<const double> beta) {
  std::vector<double> eta;
  compute_eta(data, {}, beta, eta);
  SweepResult r;
  risk_set_sweep(data, sort_order(data), eta, true, r);
  return r.score;
}

}  // namespace episcan::cox

// Independent reference implementations used only by tests. Everything here
// is deliberately written with different algorithms/precision than the
// library (long-double Gauss-Jordan, brute-force risk sets, quadrature) so
// agreement is meaningful.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

// Least squares via long-double normal equations and Gauss-Jordan.
struct LsqFit {
  std::vector<double> beta;
  double sigma2 = 0.0;                // RSS / (n - q)
  std::vector<double> cov;            // q x q row-major, sigma2 * (X'X)^-1
};
LsqFit lsq(const std::vector<std::vector<double>>& cols,
           const std::vector<double>& y);

// Direct Newton iteration on the analytic score/Hessian of the logistic or
// Poisson (log link, offsets) log-likelihood, long double throughout.
enum class GlmKind { Logistic, Poisson };
std::vector<double> newton_glm(const std::vector<std::vector<double>>& cols,
                               const std::vector<double>& y, GlmKind kind,
                               const std::vector<double>& offsets = {},
                               int iters = 200);

// One-covariate Cox log partial likelihood by brute-force risk sets
// (subjects with T_j >= T_i), and its golden-section maximizer.
double cox_loglik_1d(const std::vector<double>& time,
                     const std::vector<std::uint8_t>& event,
                     const std::vector<double>& x, double beta);
double cox_mle_1d(const std::vector<double>& time,
                  const std::vector<std::uint8_t>& event,
                  const std::vector<double>& x, double lo = -20.0,
                  double hi = 20.0);

// P(X < h, Y < k) for a standard bivariate normal, via Simpson quadrature of
// phi(x) * Phi((k - rho x)/sqrt(1 - rho^2)).
double bvn_cdf_quadrature(double h, double k, double rho);

// Nelson-Aalen cumulative hazard evaluated at t.
double nelson_aalen(const std::vector<double>& time,
                    const std::vector<std::uint8_t>& event, double t);

double pearson(const std::vector<double>& a, const std::vector<double>& b);
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Pool-adjacent-violators isotonic (non-decreasing) fit.
std::vector<double> pava(const std::vector<double>& y);

// Central finite difference of a 1-D function.
template <typename F>
double central_diff(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle

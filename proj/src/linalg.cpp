#include "episcan/linalg.hpp"

#include <cmath>

#include "episcan/errors.hpp"

namespace episcan::linalg {

bool cholesky(const SymMat& a, SymMat& l) {
  std::size_t q = a.dim();
  l = SymMat(q);
  for (std::size_t j = 0; j < q; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    double dj = std::sqrt(d);
    l(j, j) = dj;
    for (std::size_t i = j + 1; i < q; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / dj;
    }
  }
  return true;
}

std::vector<double> chol_solve(const SymMat& l, const std::vector<double>& b) {
  std::size_t q = l.dim();
  if (b.size() != q) throw_error(ErrorCode::InvalidInput, "chol_solve: size mismatch");
  std::vector<double> x(b);
  for (std::size_t i = 0; i < q; ++i) {  // L y = b
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  for (std::size_t ii = q; ii-- > 0;) {  // L^T x = y
    double s = x[ii];
    for (std::size_t k = ii + 1; k < q; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

SymMat chol_inverse(const SymMat& l) {
  std::size_t q = l.dim();
  SymMat inv(q);
  std::vector<double> e(q, 0.0);
  for (std::size_t j = 0; j < q; ++j) {
    e.assign(q, 0.0);
    e[j] = 1.0;
    std::vector<double> col = chol_solve(l, e);
    for (std::size_t i = 0; i < q; ++i) inv(i, j) = col[i];
  }
  // Symmetrize the round-off.
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j) {
      double v = 0.5 * (inv(i, j) + inv(j, i));
      inv.set_symmetric(i, j, v);
    }
  return inv;
}

namespace {

double norm1(const SymMat& a) {
  std::size_t q = a.dim();
  double best = 0.0;
  for (std::size_t j = 0; j < q; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < q; ++i) s += std::fabs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

}  // namespace

double condition_1norm(const SymMat& a, const SymMat& a_inv) {
  return norm1(a) * norm1(a_inv);
}

}  // namespace episcan::linalg

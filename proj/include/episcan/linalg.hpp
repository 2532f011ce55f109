// Small dense symmetric linear algebra for the q x q systems of the fitters
// (q is a handful of coefficients; nothing here is meant for large matrices).
#pragma once

#include <cstddef>
#include <vector>

namespace episcan::linalg {

// Dense symmetric matrix, row-major, dimension q.
class SymMat {
public:
  SymMat() = default;
  explicit SymMat(std::size_t q) : q_(q), a_(q * q, 0.0) {}

  std::size_t dim() const { return q_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * q_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * q_ + j]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  void set_symmetric(std::size_t i, std::size_t j, double v) {
    a_[i * q_ + j] = v;
    a_[j * q_ + i] = v;
  }

private:
  std::size_t q_ = 0;
  std::vector<double> a_;
};

// Cholesky factorization A = L L^T of a symmetric positive-definite matrix.
// Returns false if a pivot is not strictly positive (A not SPD at working
// precision).
bool cholesky(const SymMat& a, SymMat& l);

// Solve A x = b given the Cholesky factor L.
std::vector<double> chol_solve(const SymMat& l, const std::vector<double>& b);

// A^{-1} from the Cholesky factor.
SymMat chol_inverse(const SymMat& l);

// 1-norm condition estimate ||A||_1 * ||A^{-1}||_1.
double condition_1norm(const SymMat& a, const SymMat& a_inv);

}  // namespace episcan::linalg

// Scalar reference kernels. The 4-lane blocking below is the contract every
// SIMD backend reproduces exactly: lane k accumulates elements i with
// i % 4 == k, the tail lands in lanes 0..r-1, and the fold is
// (acc0+acc2)+(acc1+acc3).
#include "episcan/kernels.hpp"

namespace episcan::kernels::detail {
namespace {

inline double fold4(const double acc[4]) {
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i];
  return fold4(acc);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i];
  return fold4(acc);
}

double dot3_scalar(const double* x, const double* y, const double* z,
                   std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += x[i] * y[i] * z[i];
    acc[1] += x[i + 1] * y[i + 1] * z[i + 1];
    acc[2] += x[i + 2] * y[i + 2] * z[i + 2];
    acc[3] += x[i + 3] * y[i + 3] * z[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i] * z[i];
  return fold4(acc);
}

void mul_scalar(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Vtable scalar_vtable = {sum_scalar, dot_scalar, dot3_scalar, mul_scalar,
                              axpy_scalar};

}  // namespace episcan::kernels::detail

// NEON kernels (aarch64). Two 128-bit accumulators carry scalar lanes
// {0,1} and {2,3}; tail and fold mirror the scalar reference bit for bit.
#if defined(__aarch64__)

#include <arm_neon.h>

#include "episcan/kernels.hpp"

namespace episcan::kernels::detail {
namespace {

inline double fold4(const double acc[4]) {
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    a01 = vaddq_f64(a01, vld1q_f64(x + i));
    a23 = vaddq_f64(a23, vld1q_f64(x + i + 2));
  }
  double acc[4];
  vst1q_f64(acc, a01);
  vst1q_f64(acc + 2, a23);
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i];
  return fold4(acc);
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    a23 = vaddq_f64(a23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double acc[4];
  vst1q_f64(acc, a01);
  vst1q_f64(acc + 2, a23);
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i];
  return fold4(acc);
}

double dot3_neon(const double* x, const double* y, const double* z,
                 std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    float64x2_t p01 = vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    float64x2_t p23 = vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    a01 = vaddq_f64(a01, vmulq_f64(p01, vld1q_f64(z + i)));
    a23 = vaddq_f64(a23, vmulq_f64(p23, vld1q_f64(z + i + 2)));
  }
  double acc[4];
  vst1q_f64(acc, a01);
  vst1q_f64(acc + 2, a23);
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i] * z[i];
  return fold4(acc);
}

void mul_neon(double* out, const double* x, const double* y, std::size_t n) {
  std::size_t n2 = n & ~std::size_t(1);
  for (std::size_t i = 0; i < n2; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  if (n2 < n) out[n2] = x[n2] * y[n2];
}

void axpy_neon(double* y, double a, const double* x, std::size_t n) {
  float64x2_t va = vdupq_n_f64(a);
  std::size_t n2 = n & ~std::size_t(1);
  for (std::size_t i = 0; i < n2; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  if (n2 < n) y[n2] += a * x[n2];
}

}  // namespace

const Vtable neon_vtable = {sum_neon, dot_neon, dot3_neon, mul_neon,
                            axpy_neon};

}  // namespace episcan::kernels::detail

#endif  // __aarch64__

// AVX2 kernels. One 256-bit accumulator holds the four scalar lanes; the
// tail and the final fold run exactly as in the scalar reference, so results
// match the scalar backend bit for bit (mul/add only, no fma).
#if defined(__x86_64__)

#include <immintrin.h>

#include "episcan/kernels.hpp"

namespace episcan::kernels::detail {
namespace {

inline double fold4(const double acc[4]) {
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i];
  return fold4(acc);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    vacc = _mm256_add_pd(vacc, p);
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i];
  return fold4(acc);
}

double dot3_avx2(const double* x, const double* y, const double* z,
                 std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    p = _mm256_mul_pd(p, _mm256_loadu_pd(z + i));
    vacc = _mm256_add_pd(vacc, p);
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i] * z[i];
  return fold4(acc);
}

void mul_avx2(double* out, const double* x, const double* y, std::size_t n) {
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (std::size_t i = n4; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Vtable avx2_vtable = {sum_avx2, dot_avx2, dot3_avx2, mul_avx2,
                            axpy_avx2};

}  // namespace episcan::kernels::detail

#endif  // __x86_64__

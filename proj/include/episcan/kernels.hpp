// Inner-loop arithmetic kernels: scalar reference plus SIMD variants chosen
// at runtime. Every reduction uses the same fixed 4-accumulator blocking and
// the same final fold (acc0+acc2)+(acc1+acc3), so all backends return
// bit-identical doubles on identical inputs. Tests assert that equivalence.
#pragma once

#include <cstddef>

namespace episcan::kernels {

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend b);
bool backend_supported(Backend b);

// Backend selected at startup: best supported one, unless the environment
// variable EPISCAN_KERNELS={scalar,avx2,neon} asks for another.
Backend active_backend();

// Test hook; throws episcan::Error(InvalidInput) if unsupported on this CPU.
void set_backend(Backend b);

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* x, const double* y, const double* z, std::size_t n);

// out[i] = x[i] * y[i]
void mul(double* out, const double* x, const double* y, std::size_t n);
// y[i] += a * x[i]
void axpy(double* y, double a, const double* x, std::size_t n);

namespace detail {

struct Vtable {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  void (*mul)(double*, const double*, const double*, std::size_t);
  void (*axpy)(double*, double, const double*, std::size_t);
};

extern const Vtable scalar_vtable;
#if defined(__x86_64__)
extern const Vtable avx2_vtable;
#endif
#if defined(__aarch64__)
extern const Vtable neon_vtable;
#endif

}  // namespace detail

}  // namespace episcan::kernels

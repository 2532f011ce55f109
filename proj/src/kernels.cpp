// Backend selection and dispatch.
#include "episcan/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "episcan/errors.hpp"

namespace episcan::kernels {

namespace {

using detail::Vtable;

const Vtable* vtable_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &detail::scalar_vtable;
    case Backend::Avx2:
#if defined(__x86_64__)
      return &detail::avx2_vtable;
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return &detail::neon_vtable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;  // NEON is baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

Backend pick_default() {
  if (const char* env = std::getenv("EPISCAN_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_supports(Backend::Avx2))
      return Backend::Avx2;
    if (std::strcmp(env, "neon") == 0 && cpu_supports(Backend::Neon))
      return Backend::Neon;
    // Unknown or unsupported request: fall through to auto-detection.
  }
  if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
  if (cpu_supports(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

struct State {
  std::atomic<const Vtable*> vt;
  std::atomic<Backend> backend;
  State() {
    Backend b = pick_default();
    backend.store(b, std::memory_order_relaxed);
    vt.store(vtable_for(b), std::memory_order_relaxed);
  }
};

State& state() {
  static State s;
  return s;
}

inline const Vtable& vt() {
  return *state().vt.load(std::memory_order_relaxed);
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "?";
}

bool backend_supported(Backend b) { return cpu_supports(b); }

Backend active_backend() {
  return state().backend.load(std::memory_order_relaxed);
}

void set_backend(Backend b) {
  if (!cpu_supports(b))
    throw_error(ErrorCode::InvalidInput,
                std::string("kernel backend not supported on this CPU: ") +
                    backend_name(b));
  state().backend.store(b, std::memory_order_relaxed);
  state().vt.store(vtable_for(b), std::memory_order_relaxed);
}

double sum(const double* x, std::size_t n) { return vt().sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) {
  return vt().dot(x, y, n);
}

double dot3(const double* x, const double* y, const double* z, std::size_t n) {
  return vt().dot3(x, y, z, n);
}

void mul(double* out, const double* x, const double* y, std::size_t n) {
  vt().mul(out, x, y, n);
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  vt().axpy(y, a, x, n);
}

}  // namespace episcan::kernels

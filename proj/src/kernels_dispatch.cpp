#include "coopnet/kernels.hpp"

#include <stdexcept>

#if defined(COOPNET_COMPILE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
#define COOPNET_AVX2_AVAILABLE 1
#else
#define COOPNET_AVX2_AVAILABLE 0
#endif

namespace coopnet::kernels {

namespace {

bool cpu_has_avx2() {
#if COOPNET_AVX2_AVAILABLE
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

Backend g_backend = detect_backend();

} // namespace

Backend active_backend() { return g_backend; }

bool backend_supported(Backend b) {
  return b == Backend::scalar || (b == Backend::avx2 && cpu_has_avx2());
}

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("kernel backend not supported on this CPU");
  }
  g_backend = b;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void squared_norms(const double* xs, const double* ys, double* out, std::size_t n) {
#if COOPNET_AVX2_AVAILABLE
  if (g_backend == Backend::avx2) return detail::squared_norms_avx2(xs, ys, out, n);
#endif
  detail::squared_norms_scalar(xs, ys, out, n);
}

void pathloss_from_d2(const double* d2, double* out, std::size_t n, double alpha) {
#if COOPNET_AVX2_AVAILABLE
  if (g_backend == Backend::avx2) return detail::pathloss_from_d2_avx2(d2, out, n, alpha);
#endif
  detail::pathloss_from_d2_scalar(d2, out, n, alpha);
}

double weighted_sum(const double* a, const double* b, std::size_t n) {
#if COOPNET_AVX2_AVAILABLE
  if (g_backend == Backend::avx2) return detail::weighted_sum_avx2(a, b, n);
#endif
  return detail::weighted_sum_scalar(a, b, n);
}

} // namespace coopnet::kernels

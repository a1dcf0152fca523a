#pragma once

#include <cstddef>

// Data-parallel inner loops of the Monte Carlo engine. Each kernel has a
// scalar reference implementation and an AVX2 variant; the dispatcher picks
// one at startup based on the CPU and can be overridden for equivalence
// testing. Results agree with the scalar reference to rounding (the SIMD
// dot product uses a different accumulation order).
namespace coopnet::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
// Force a backend; throws std::invalid_argument if it is unsupported on
// this machine. Intended for tests and the --kernels flag.
void set_backend(Backend b);
bool backend_supported(Backend b);
const char* backend_name(Backend b);

// out[i] = xs[i]^2 + ys[i]^2
void squared_norms(const double* xs, const double* ys, double* out, std::size_t n);

// out[i] = d2[i]^(-alpha/2).  Even integer alpha in {2,4,6,8} uses exact
// reciprocal-power chains; other exponents fall back to pow() lane-wise.
void pathloss_from_d2(const double* d2, double* out, std::size_t n, double alpha);

// sum_i a[i] * b[i]
double weighted_sum(const double* a, const double* b, std::size_t n);

namespace detail {
void squared_norms_scalar(const double* xs, const double* ys, double* out, std::size_t n);
void pathloss_from_d2_scalar(const double* d2, double* out, std::size_t n, double alpha);
double weighted_sum_scalar(const double* a, const double* b, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
void squared_norms_avx2(const double* xs, const double* ys, double* out, std::size_t n);
void pathloss_from_d2_avx2(const double* d2, double* out, std::size_t n, double alpha);
double weighted_sum_avx2(const double* a, const double* b, std::size_t n);
#endif
} // namespace detail

} // namespace coopnet::kernels

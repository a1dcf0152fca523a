#include "coopnet/kernels.hpp"

#if defined(COOPNET_COMPILE_AVX2) && (defined(__x86_64__) || defined(_M_X64))

#include <immintrin.h>

#include <cmath>

namespace coopnet::kernels::detail {

void squared_norms_avx2(const double* xs, const double* ys, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d y = _mm256_loadu_pd(ys + i);
    // mul+add (no FMA) so lanes match the scalar reference bit for bit
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
  }
  for (; i < n; ++i) out[i] = xs[i] * xs[i] + ys[i] * ys[i];
}

void pathloss_from_d2_avx2(const double* d2, double* out, std::size_t n, double alpha) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  if (alpha == 4.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_div_pd(one, _mm256_loadu_pd(d2 + i));
      _mm256_storeu_pd(out + i, _mm256_mul_pd(r, r));
    }
    for (; i < n; ++i) {
      const double r = 1.0 / d2[i];
      out[i] = r * r;
    }
  } else if (alpha == 2.0) {
    for (; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_loadu_pd(d2 + i)));
    }
    for (; i < n; ++i) out[i] = 1.0 / d2[i];
  } else if (alpha == 6.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_div_pd(one, _mm256_loadu_pd(d2 + i));
      _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(r, r), r));
    }
    for (; i < n; ++i) {
      const double r = 1.0 / d2[i];
      out[i] = r * r * r;
    }
  } else if (alpha == 8.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_div_pd(one, _mm256_loadu_pd(d2 + i));
      const __m256d r2 = _mm256_mul_pd(r, r);
      _mm256_storeu_pd(out + i, _mm256_mul_pd(r2, r2));
    }
    for (; i < n; ++i) {
      const double r = 1.0 / d2[i];
      const double r2 = r * r;
      out[i] = r2 * r2;
    }
  } else {
    // No vector pow; keep the lane semantics identical to the reference.
    const double p = -0.5 * alpha;
    for (; i < n; ++i) out[i] = std::pow(d2[i], p);
  }
}

double weighted_sum_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

} // namespace coopnet::kernels::detail

#endif

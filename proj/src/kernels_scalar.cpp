#include "coopnet/kernels.hpp"

#include <cmath>

namespace coopnet::kernels::detail {

void squared_norms_scalar(const double* xs, const double* ys, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = xs[i] * xs[i] + ys[i] * ys[i];
  }
}

void pathloss_from_d2_scalar(const double* d2, double* out, std::size_t n, double alpha) {
  if (alpha == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = 1.0 / d2[i];
      out[i] = r * r;
    }
  } else if (alpha == 2.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / d2[i];
  } else if (alpha == 6.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = 1.0 / d2[i];
      out[i] = r * r * r;
    }
  } else if (alpha == 8.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = 1.0 / d2[i];
      const double r2 = r * r;
      out[i] = r2 * r2;
    }
  } else {
    const double p = -0.5 * alpha;
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(d2[i], p);
  }
}

double weighted_sum_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

} // namespace coopnet::kernels::detail

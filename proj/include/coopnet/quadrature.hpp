#pragma once

#include <cstdint>
#include <functional>

namespace coopnet {

struct QuadratureSpec {
  double rel_tol = 1e-7;
  double abs_tol = 1e-9;
  std::uint64_t max_evals = 1'000'000;
  std::uint64_t qmc_points = 1u << 16; // power of two, >= 4096

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0; // estimated absolute error (empirical SE for QMC)
  bool converged = true;
};

// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity (internal variable
// transform, via Boost.Math).
IntegralResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec);

// Integral of f over [0,1]^d. Tensor Gauss-Legendre for d <= 2; randomized
// (shifted) Halton for d >= 3 with 8 independent randomizations providing
// the empirical standard error. The randomization seeds are fixed, so the
// result is a deterministic function of (f, d, spec).
IntegralResult integrate_hypercube(const std::function<double(const double*)>& f, int d,
                                   const QuadratureSpec& spec);

} // namespace coopnet

#include "coopnet/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "coopnet/rng.hpp"

namespace coopnet {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

struct GlRule {
  std::vector<double> x; // nodes on [0,1]
  std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on P_n; mapped to [0,1].
GlRule make_gl(int n) {
  GlRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    r.x[i] = 0.5 * (1.0 - t); // descending t -> ascending x
    r.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return r;
}

const GlRule& gl32() {
  static const GlRule r = make_gl(32);
  return r;
}
const GlRule& gl64() {
  static const GlRule r = make_gl(64);
  return r;
}

double tensor_gl(const std::function<double(const double*)>& f, int d, const GlRule& g) {
  if (d == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(&g.x[i]);
    return s;
  }
  double s = 0.0;
  double pt[2];
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    pt[0] = g.x[i];
    double row = 0.0;
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      pt[1] = g.x[j];
      row += g.w[j] * f(pt);
    }
    s += g.w[i] * row;
  }
  return s;
}

constexpr std::array<int, 8> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double v = 0.0;
  while (i > 0) {
    v += f * (double)(i % base);
    i /= base;
    f *= inv;
  }
  return v;
}

constexpr std::uint64_t kQmcSeed = 0x51ED0A7C0FFEEull;
constexpr int kQmcRandomizations = 8;

} // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  }
  if (max_evals < 1) throw std::invalid_argument("QuadratureSpec: max_evals must be >= 1");
  if (qmc_points < 4096 || !is_pow2(qmc_points)) {
    throw std::invalid_argument("QuadratureSpec: qmc_points must be a power of two >= 4096");
  }
}

IntegralResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec) {
  spec.validate();
  // 15-point kernel doubles work per level; cap depth from the budget.
  int depth = 1;
  while ((15ull << (depth + 1)) < spec.max_evals && depth < 22) ++depth;
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, depth, spec.rel_tol, &err);
  IntegralResult res;
  res.value = value;
  res.error = err;
  res.converged = err <= 10.0 * std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
  return res;
}

IntegralResult integrate_hypercube(const std::function<double(const double*)>& f, int d,
                                   const QuadratureSpec& spec) {
  spec.validate();
  if (d < 1) throw std::invalid_argument("integrate_hypercube: d must be >= 1");
  if (d <= 2) {
    const double coarse = tensor_gl(f, d, gl32());
    const double fine = tensor_gl(f, d, gl64());
    IntegralResult res;
    res.value = fine;
    res.error = std::fabs(fine - coarse);
    res.converged = res.error <= 10.0 * std::max(spec.abs_tol, spec.rel_tol * std::fabs(fine));
    return res;
  }
  if (d > (int)kHaltonBases.size()) {
    throw std::invalid_argument("integrate_hypercube: dimension too large");
  }
  // Cranley-Patterson shifted Halton; fixed seeds keep results reproducible
  // and smooth as a function of integrand parameters.
  std::array<double, kQmcRandomizations> est{};
  std::vector<double> pt(d);
  for (int r = 0; r < kQmcRandomizations; ++r) {
    std::array<double, 8> shift{};
    for (int k = 0; k < d; ++k) shift[k] = rng::uniform(rng::mix(kQmcSeed, r, k));
    double sum = 0.0;
    for (std::uint64_t i = 0; i < spec.qmc_points; ++i) {
      for (int k = 0; k < d; ++k) {
        double v = radical_inverse(i, kHaltonBases[k]) + shift[k];
        if (v >= 1.0) v -= 1.0;
        pt[k] = v;
      }
      sum += f(pt.data());
    }
    est[r] = sum / (double)spec.qmc_points;
  }
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= kQmcRandomizations;
  double var = 0.0;
  for (double e : est) var += (e - mean) * (e - mean);
  var /= (kQmcRandomizations - 1);
  IntegralResult res;
  res.value = mean;
  res.error = std::sqrt(var / kQmcRandomizations);
  res.converged = res.error <= 100.0 * std::max(spec.abs_tol, spec.rel_tol * std::fabs(mean));
  return res;
}

} // namespace coopnet

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "coopnet/analytic.hpp"
#include "coopnet/hypergeom.hpp"

using namespace coopnet;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Direct 2-D evaluation of the no-cluster-hit term: nested quadrature over
// (u_0, u_M) with the exponent A(theta, u) = u * c(theta) spelled out,
// bypassing the 1-D reduction under test.
double q_n0_direct(double t_n, const NetworkParams& params, const QuadratureSpec& spec) {
  const SlopeFn slope(params.alpha);
  const int m = params.m_coop;
  const double tau = params.tau;
  const double lg = std::lgamma((double)m);
  auto outer = [&](double u0) {
    auto inner = [&](double um) {
      if (um <= 0.0) return 0.0;
      const double theta = tau * std::pow(u0 / um, params.alpha / 2.0);
      const double expo = -u0 * slope(tau) - um * (1.0 / t_n - 1.0) * slope(theta) +
                          (m - 1.0) * std::log(um) - lg - m * std::log(t_n);
      return std::exp(expo);
    };
    return integrate_1d(inner, 0.0, u0, spec).value;
  };
  return integrate_1d(outer, 0.0, kInf, spec).value;
}

// Direct evaluation of the cooperative terms with the u-integral done
// numerically instead of via the gamma identity.
double r_m1_direct(int m, const NetworkParams& params, const QuadratureSpec& spec) {
  if (m == params.m_coop) return 0.0;
  const SlopeFn slope(params.alpha);
  const double lg = std::lgamma((double)params.m_coop);
  auto cube = [&](const double* t) {
    double sigma = 0.0;
    for (int i = 0; i < m; ++i) sigma += std::pow(t[i], -params.alpha / 2.0);
    auto over_u = [&](double u) {
      double acc = 0.0;
      double sign = 1.0;
      for (int j = 1; j <= m; ++j) {
        const double theta = std::isinf(sigma) ? 0.0 : j * params.tau / sigma;
        acc += sign * binomial_coeff(m, j) *
               std::exp(-u * slope(theta) + (params.m_coop - 1.0) * std::log(u) - lg);
        sign = -sign;
      }
      return acc;
    };
    return integrate_1d(over_u, 0.0, kInf, spec).value;
  };
  return integrate_hypercube(cube, m, spec).value;
}

double r_m2_direct(int m, const NetworkParams& params, const QuadratureSpec& spec) {
  const SlopeFn slope(params.alpha);
  const double lg = std::lgamma((double)params.m_coop);
  if (m == 1) {
    auto over_u = [&](double u) {
      return std::exp(-u * slope(params.tau) + (params.m_coop - 1.0) * std::log(u) - lg);
    };
    return integrate_1d(over_u, 0.0, kInf, spec).value;
  }
  auto cube = [&](const double* t) {
    double sigma = 1.0;
    for (int i = 0; i < m - 1; ++i) sigma += std::pow(t[i], -params.alpha / 2.0);
    auto over_u = [&](double u) {
      double acc = 0.0;
      double sign = 1.0;
      for (int j = 1; j <= m; ++j) {
        acc += sign * binomial_coeff(m, j) *
               std::exp(-u * slope(j * params.tau / sigma) +
                        (params.m_coop - 1.0) * std::log(u) - lg);
        sign = -sign;
      }
      return acc;
    };
    return integrate_1d(over_u, 0.0, kInf, spec).value;
  };
  return integrate_hypercube(cube, m - 1, spec).value;
}

} // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binomial_coeff(4, 0) == 1.0);
  CHECK(binomial_coeff(4, 2) == 6.0);
  CHECK(binomial_coeff(6, 3) == 20.0);
  CHECK(binomial_coeff(3, 5) == 0.0);
}

TEST_CASE("R_m2 at m=1 equals c(tau)^-M exactly") {
  NetworkParams params;
  params.alpha = 4.0;
  params.m_coop = 1;
  params.tau = 1.0;
  const QuadratureSpec spec;
  // M=1: single-BS coverage 1/(1 + pi/4)
  CHECK(r_m2(1, params, spec).value == doctest::Approx(0.5600991535).epsilon(1e-9));
  params.m_coop = 3;
  CHECK(r_m2(1, params, spec).value ==
        doctest::Approx(std::pow(1.0 + M_PI / 4.0, -3.0)).epsilon(1e-12));
}

TEST_CASE("reduced integrals match direct nested quadrature") {
  QuadratureSpec spec;
  for (double alpha : {3.0, 4.0}) {
    for (double tau : {0.5, 1.0, 4.0}) {
      for (int m_coop : {2, 3}) {
        NetworkParams params;
        params.alpha = alpha;
        params.tau = tau;
        params.m_coop = m_coop;
        for (int m = 1; m <= std::min(2, m_coop); ++m) {
          CAPTURE(alpha);
          CAPTURE(tau);
          CAPTURE(m_coop);
          CAPTURE(m);
          CHECK(r_m1(m, params, spec).value ==
                doctest::Approx(r_m1_direct(m, params, spec)).epsilon(1e-6));
          CHECK(r_m2(m, params, spec).value ==
                doctest::Approx(r_m2_direct(m, params, spec)).epsilon(1e-6));
        }
        for (double t : {0.2, 0.6, 0.9}) {
          CAPTURE(t);
          CHECK(q_n0(t, params, spec).value ==
                doctest::Approx(q_n0_direct(t, params, spec)).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("coop table weights: q_c = (1 - m/M) R1 + (m/M) R2") {
  NetworkParams params;
  params.m_coop = 4;
  params.tau = 2.0;
  const QuadratureSpec spec;
  const CoopTermTable t = coop_terms(params, spec);
  REQUIRE(t.q_c.size() == 4);
  for (int m = 1; m <= 4; ++m) {
    const double w = (double)m / 4.0;
    CHECK(t.q_c[(std::size_t)m - 1] ==
          doctest::Approx((1.0 - w) * t.r1[(std::size_t)m - 1] +
                          w * t.r2[(std::size_t)m - 1]).epsilon(1e-14));
  }
  CHECK(t.r1[3] == 0.0); // m = M case
}

TEST_CASE("per-file STP: limits, monotonicity in T, and binomial mixing") {
  NetworkParams params;
  const QuadratureSpec spec;
  const CoopTermTable table = coop_terms(params, spec);
  CHECK(q_file_stp(0.0, table, params, spec) == 0.0);
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double t = i / 20.0;
    const double q = q_file_stp(t, table, params, spec);
    CHECK(q >= prev - 1e-9);
    CHECK(q <= 1.0);
    prev = q;
  }
  // At T = 1 the mixture collapses onto the full-cluster term.
  CHECK(q_file_stp(1.0, table, params, spec) ==
        doctest::Approx(table.q_c.back()).epsilon(1e-12));
}

TEST_CASE("aggregate STP is invariant to lambda_b and p_b") {
  const ContentCatalog catalog = ContentCatalog::make(8, 2.0);
  PlacementVector p;
  p.t = {0.9, 0.8, 0.6, 0.4, 0.2, 0.1, 0.0, 0.0};
  p.k_cache = 3;
  const QuadratureSpec spec;
  NetworkParams params;
  const double base = stp_a(p, catalog, params, spec).aggregate;
  params.lambda_b = 0.0005;
  params.p_b = 40.0;
  const double scaled = stp_a(p, catalog, params, spec).aggregate;
  CHECK(base == scaled); // bit-identical: neither parameter enters the integrals
}

TEST_CASE("profile interpolation agrees with pointwise evaluation") {
  NetworkParams params;
  const QuadratureSpec spec;
  const CoopTermTable table = coop_terms(params, spec);
  const StpProfile profile(table, params, spec);
  for (double t : {0.013, 0.27, 0.5004, 0.731, 0.999}) {
    CHECK(profile(t) == doctest::Approx(q_file_stp(t, table, params, spec)).epsilon(2e-5));
  }
}

TEST_CASE("aggregate equals popularity-weighted per-file values") {
  const ContentCatalog catalog = ContentCatalog::make(5, 1.0);
  PlacementVector p;
  p.t = {1.0, 0.5, 0.3, 0.2, 0.0};
  p.k_cache = 2;
  NetworkParams params;
  const QuadratureSpec spec;
  const StpResult r = stp_a(p, catalog, params, spec);
  double agg = 0.0;
  for (int n = 0; n < 5; ++n) agg += catalog.popularity[(std::size_t)n] * r.per_file[(std::size_t)n];
  CHECK(r.aggregate == doctest::Approx(agg).epsilon(1e-14));
  CHECK(r.per_file[4] == 0.0);
}

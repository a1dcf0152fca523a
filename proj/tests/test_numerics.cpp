#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "coopnet/hypergeom.hpp"
#include "coopnet/quadrature.hpp"
#include "coopnet/rng.hpp"

using namespace coopnet;

TEST_CASE("F_G closed form at alpha = 4: arctan(sqrt(theta))/sqrt(theta)") {
  for (double theta : {1e-8, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e8}) {
    const double expected = std::atan(std::sqrt(theta)) / std::sqrt(theta);
    CHECK(gauss_fg(4.0, theta) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(gauss_fg(4.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interference slope at alpha = 4: c(1) = 1 + pi/4") {
  CHECK(interference_slope(4.0, 1.0) == doctest::Approx(1.0 + M_PI / 4.0).epsilon(1e-12));
  CHECK(1.0 / interference_slope(4.0, 1.0) == doctest::Approx(0.5600991535).epsilon(1e-9));
}

TEST_CASE("slope is increasing in theta and equals 1 at theta = 0") {
  for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
    const SlopeFn slope(alpha);
    CHECK(slope(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = slope(0.0);
    for (double theta = 0.25; theta <= 100.0; theta += 0.25) {
      const double cur = slope(theta);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("slope large-theta asymptote: c(theta) ~ (2pi/alpha)/sin(2pi/alpha) theta^(2/alpha)") {
  for (double alpha : {3.0, 4.0, 6.0}) {
    const SlopeFn slope(alpha);
    const double z = 2.0 * M_PI / alpha;
    const double coeff = z / std::sin(z);
    const double theta = 1e12;
    const double ratio = slope(theta) / (coeff * std::pow(theta, 2.0 / alpha));
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("gamma identity: int_0^inf exp(-c u) u^(M-1)/Gamma(M) du = c^-M") {
  const QuadratureSpec spec;
  for (int m = 1; m <= 6; ++m) {
    for (double c : {0.7, 1.0, 2.3, 17.0}) {
      auto f = [&](double u) {
        return std::exp(-c * u) * std::pow(u, m - 1.0) / std::tgamma((double)m);
      };
      const IntegralResult r =
          integrate_1d(f, 0.0, std::numeric_limits<double>::infinity(), spec);
      CHECK(r.converged);
      CHECK(r.value == doctest::Approx(std::pow(c, -(double)m)).epsilon(1e-8));
    }
  }
}

TEST_CASE("1-D quadrature on finite intervals") {
  const QuadratureSpec spec;
  const IntegralResult r1 = integrate_1d([](double x) { return x * x; }, 0.0, 1.0, spec);
  CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const IntegralResult r2 =
      integrate_1d([](double x) { return std::sin(x); }, 0.0, M_PI, spec);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hypercube quadrature: separable polynomials d = 1..5") {
  QuadratureSpec spec;
  for (int d = 1; d <= 5; ++d) {
    // prod_i x_i^2 integrates to 3^-d
    auto f = [&](const double* x) {
      double p = 1.0;
      for (int i = 0; i < d; ++i) p *= x[i] * x[i];
      return p;
    };
    const IntegralResult r = integrate_hypercube(f, d, spec);
    const double tol = d <= 2 ? 1e-12 : 5e-4;
    CHECK(r.value == doctest::Approx(std::pow(3.0, -d)).epsilon(tol));
    if (d >= 3) CHECK(r.error < 1e-3);
  }
}

TEST_CASE("hypercube quadrature is deterministic") {
  QuadratureSpec spec;
  auto f = [](const double* x) { return std::exp(-(x[0] + 2.0 * x[1] + x[2] * x[2])); };
  const double a = integrate_hypercube(f, 3, spec).value;
  const double b = integrate_hypercube(f, 3, spec).value;
  CHECK(a == b);
}

TEST_CASE("u01 never returns zero and stays in (0, 1]") {
  CHECK(rng::u01(0) > 0.0);
  CHECK(rng::u01(~0ull) <= 1.0);
  rng::Stream s(42);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_u01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("poisson sampler mean/variance across both regimes") {
  for (double mean : {3.0, 200.0}) {
    rng::Stream s(1234);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = (double)s.next_poisson(mean);
      sum += k;
      sum2 += k * k;
    }
    const double m = sum / n;
    const double var = sum2 / n - m * m;
    CHECK(m == doctest::Approx(mean).epsilon(0.03));
    CHECK(var == doctest::Approx(mean).epsilon(0.08));
  }
}

TEST_CASE("counter-based draws are pure functions of the key") {
  CHECK(rng::uniform(987654321ull) == rng::uniform(987654321ull));
  CHECK(rng::mix(1, 2) != rng::mix(2, 1));
  CHECK(rng::mix(1, 2, 3) != rng::mix(1, 3, 2));
}

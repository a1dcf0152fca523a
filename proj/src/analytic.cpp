#include "coopnet/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "coopnet/hypergeom.hpp"

namespace coopnet {

namespace {

// Large-theta slope limit: c(theta) ~ c_inf(alpha) * theta^(2/alpha).
double slope_inf_coeff(double alpha) {
  const double z = 2.0 * M_PI / alpha;
  return z / std::sin(z);
}

} // namespace

double binomial_coeff(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

IntegralResult q_n0(double t_n, const NetworkParams& params, const QuadratureSpec& spec) {
  params.validate();
  if (!(t_n > 0.0 && t_n <= 1.0)) {
    throw std::invalid_argument("q_n0: t_n must be in (0, 1]");
  }
  const int m = params.m_coop;
  const double alpha = params.alpha;
  const double tau = params.tau;
  const SlopeFn slope(alpha);
  const double c_tau = slope(tau);
  const double ratio = 1.0 / t_n - 1.0;
  const double c_inf = slope_inf_coeff(alpha) * std::pow(tau, 2.0 / alpha);
  const double inv_tm = std::pow(t_n, -(double)m);

  // Substituting v = u_M/u_0 and integrating u_0 analytically:
  //   q_n0 = int_0^1 M v^(M-1) / (T^M * (c(tau) + v*(1/T-1)*c(tau*v^(-a/2)))^(M+1)) dv.
  auto integrand = [&](double v) -> double {
    if (v <= 0.0) return 0.0;
    const double theta = tau * std::pow(v, -alpha / 2.0);
    // v -> 0: v * c(theta) -> c_inf * tau^(2/alpha); keep the limit explicit
    // when theta overflows.
    const double vc = std::isfinite(theta) ? v * slope(theta) : c_inf + v;
    const double ctot = c_tau + ratio * vc;
    return m * std::pow(v, m - 1.0) * inv_tm / std::pow(ctot, m + 1.0);
  };
  return integrate_1d(integrand, 0.0, 1.0, spec);
}

IntegralResult r_m1(int m, const NetworkParams& params, const QuadratureSpec& spec) {
  params.validate();
  const int m_coop = params.m_coop;
  if (m < 1 || m > m_coop) throw std::invalid_argument("r_m1: m must be in [1, M]");
  if (m == m_coop) return {0.0, 0.0, true}; // the M-th BS is outside the cooperative set
  const double alpha = params.alpha;
  const double tau = params.tau;
  const SlopeFn slope(alpha);

  auto integrand = [&](const double* t) -> double {
    double sigma = 0.0;
    for (int i = 0; i < m; ++i) sigma += std::pow(t[i], -alpha / 2.0);
    long double acc = 0.0L;
    double sign = 1.0;
    for (int j = 1; j <= m; ++j) {
      const double theta = std::isinf(sigma) ? 0.0 : j * tau / sigma;
      acc += (long double)(sign * binomial_coeff(m, j) * std::pow(slope(theta), -(double)m_coop));
      sign = -sign;
    }
    return (double)acc;
  };
  return integrate_hypercube(integrand, m, spec);
}

IntegralResult r_m2(int m, const NetworkParams& params, const QuadratureSpec& spec) {
  params.validate();
  const int m_coop = params.m_coop;
  if (m < 1 || m > m_coop) throw std::invalid_argument("r_m2: m must be in [1, M]");
  const double alpha = params.alpha;
  const double tau = params.tau;
  const SlopeFn slope(alpha);
  if (m == 1) {
    // Gamma reduction is exact here: c(tau)^-M.
    return {std::pow(slope(tau), -(double)m_coop), 0.0, true};
  }
  auto integrand = [&](const double* t) -> double {
    double sigma = 1.0;
    for (int i = 0; i < m - 1; ++i) sigma += std::pow(t[i], -alpha / 2.0);
    long double acc = 0.0L;
    double sign = 1.0;
    for (int j = 1; j <= m; ++j) {
      const double theta = std::isinf(sigma) ? 0.0 : j * tau / sigma;
      acc += (long double)(sign * binomial_coeff(m, j) * std::pow(slope(theta), -(double)m_coop));
      sign = -sign;
    }
    return (double)acc;
  };
  return integrate_hypercube(integrand, m - 1, spec);
}

CoopTermTable coop_terms(const NetworkParams& params, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  CoopTermTable table;
  table.m_coop = params.m_coop;
  table.tau = params.tau;
  table.alpha = params.alpha;
  const int M = params.m_coop;
  table.q_c.resize((std::size_t)M);
  table.r1.resize((std::size_t)M);
  table.r2.resize((std::size_t)M);
  table.error_estimates.resize((std::size_t)M);
  for (int m = 1; m <= M; ++m) {
    const IntegralResult a = r_m1(m, params, spec);
    const IntegralResult b = r_m2(m, params, spec);
    const double w2 = (double)m / M;
    table.r1[(std::size_t)m - 1] = a.value;
    table.r2[(std::size_t)m - 1] = b.value;
    table.q_c[(std::size_t)m - 1] = (1.0 - w2) * a.value + w2 * b.value;
    table.error_estimates[(std::size_t)m - 1] = (1.0 - w2) * a.error + w2 * b.error;
    table.converged = table.converged && a.converged && b.converged;
  }
  return table;
}

double q_file_stp(double t_n, const CoopTermTable& table, const NetworkParams& params,
                  const QuadratureSpec& spec) {
  if (!(t_n >= 0.0 && t_n <= 1.0)) throw std::invalid_argument("q_file_stp: t_n out of [0, 1]");
  if (table.m_coop != params.m_coop || table.tau != params.tau || table.alpha != params.alpha) {
    throw std::invalid_argument("q_file_stp: table does not match params");
  }
  if (t_n <= 0.0) return 0.0; // cached nowhere; delivery impossible
  const int M = params.m_coop;
  double acc = 0.0;
  const double miss = std::pow(1.0 - t_n, (double)M);
  if (miss > 0.0) acc += miss * q_n0(t_n, params, spec).value;
  for (int m = 1; m <= M; ++m) {
    const double w = binomial_coeff(M, m) * std::pow(t_n, (double)m) *
                     std::pow(1.0 - t_n, (double)(M - m));
    acc += w * table.q_c[(std::size_t)m - 1];
  }
  return std::min(1.0, std::max(0.0, acc));
}

StpProfile::StpProfile(const CoopTermTable& table, const NetworkParams& params,
                       const QuadratureSpec& spec, int grid_points)
    : grid_points_(grid_points) {
  if (grid_points < 21) throw std::invalid_argument("StpProfile: need >= 21 grid points");
  std::vector<double> xs((std::size_t)grid_points), ys((std::size_t)grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double t = (double)i / (grid_points - 1);
    xs[(std::size_t)i] = t;
    ys[(std::size_t)i] = q_file_stp(t, table, params, spec);
  }
  interp_ = Pchip(std::move(xs), std::move(ys));
}

double StpProfile::operator()(double t) const {
  return std::min(1.0, std::max(0.0, interp_(t)));
}

StpResult stp_a(const PlacementVector& placement, const ContentCatalog& catalog,
                const NetworkParams& params, const QuadratureSpec& spec) {
  return stp_a(placement, catalog, params, spec, coop_terms(params, spec));
}

StpResult stp_a(const PlacementVector& placement, const ContentCatalog& catalog,
                const NetworkParams& params, const QuadratureSpec& spec,
                const CoopTermTable& table) {
  require_valid_placement(placement);
  catalog.validate();
  if (placement.n_files() != catalog.n_files) {
    throw std::invalid_argument("stp_a: placement/catalog size mismatch");
  }
  StpResult res;
  res.engine = StpEngine::analytic;
  res.per_file.resize((std::size_t)catalog.n_files);
  res.per_file_error.assign((std::size_t)catalog.n_files, 0.0);
  double table_err = 0.0;
  for (double e : table.error_estimates) table_err = std::max(table_err, e);

  if (catalog.n_files > 32) {
    const StpProfile profile(table, params, spec);
    for (int n = 0; n < catalog.n_files; ++n) {
      res.per_file[(std::size_t)n] = profile(placement.t[(std::size_t)n]);
    }
  } else {
    for (int n = 0; n < catalog.n_files; ++n) {
      res.per_file[(std::size_t)n] = q_file_stp(placement.t[(std::size_t)n], table, params, spec);
    }
  }
  double agg = 0.0;
  for (int n = 0; n < catalog.n_files; ++n) {
    agg += catalog.popularity[(std::size_t)n] * res.per_file[(std::size_t)n];
    res.per_file_error[(std::size_t)n] = table_err;
  }
  res.aggregate = agg;
  res.error = table_err;
  return res;
}

} // namespace coopnet

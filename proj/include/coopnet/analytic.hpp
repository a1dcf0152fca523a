#pragma once

#include <vector>

#include "coopnet/model.hpp"
#include "coopnet/pchip.hpp"
#include "coopnet/quadrature.hpp"

// Analytic STP approximation: per-file conditional terms and the
// popularity-weighted aggregate. All integrals are reduced by the exact
// gamma identity  int_0^inf exp(-c*u) u^(M-1)/Gamma(M) du = c^-M  (the
// exponent A(theta, u) is linear in u), so the nearest-BS fallback term is
// one 1-D integral and the cooperative terms are integrals over [0,1]^d.
namespace coopnet {

// Cooperative conditional STP terms for m = 1..M; independent of the
// placement vector and the catalog.
struct CoopTermTable {
  int m_coop = 0;
  double tau = 0.0;
  double alpha = 0.0;
  std::vector<double> q_c; // q_c[m-1], m = 1..M
  std::vector<double> r1;
  std::vector<double> r2;
  std::vector<double> error_estimates; // per q_c entry
  bool converged = true;
};

// Conditional STP given no cluster BS caches the file (served by the
// nearest caching BS beyond the cluster). Reduced 1-D form; 0 < t_n <= 1.
IntegralResult q_n0(double t_n, const NetworkParams& params, const QuadratureSpec& spec);

// Cooperative terms; r_m1 is exactly 0 at m = M.
IntegralResult r_m1(int m, const NetworkParams& params, const QuadratureSpec& spec);
IntegralResult r_m2(int m, const NetworkParams& params, const QuadratureSpec& spec);

CoopTermTable coop_terms(const NetworkParams& params, const QuadratureSpec& spec);

// q^a_n(T): binomial mixture over the cooperative-set size. T = 0 maps to 0
// (the file is cached nowhere).
double q_file_stp(double t_n, const CoopTermTable& table, const NetworkParams& params,
                  const QuadratureSpec& spec);

// Shared profile of q^a_n as a function of T (identical for every file);
// monotone cubic interpolation over a uniform grid.
class StpProfile {
 public:
  StpProfile(const CoopTermTable& table, const NetworkParams& params, const QuadratureSpec& spec,
             int grid_points = 201);

  double operator()(double t) const;
  double derivative(double t) const { return interp_.derivative(t); }
  int grid_points() const { return grid_points_; }

 private:
  Pchip interp_;
  int grid_points_;
};

// Aggregate q^a(T) = sum_n a_n q^a_n(T_n). Uses a shared StpProfile when
// the catalog is larger than 32 files.
StpResult stp_a(const PlacementVector& placement, const ContentCatalog& catalog,
                const NetworkParams& params, const QuadratureSpec& spec);
// Same, reusing a precomputed table (sweep drivers evaluate many placements
// under one set of params).
StpResult stp_a(const PlacementVector& placement, const ContentCatalog& catalog,
                const NetworkParams& params, const QuadratureSpec& spec,
                const CoopTermTable& table);

double binomial_coeff(int n, int k);

} // namespace coopnet

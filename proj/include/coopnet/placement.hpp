#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopnet/analytic.hpp"
#include "coopnet/model.hpp"

// Content placement optimization over the capped simplex
// {0 <= T_n <= 1, sum T_n = K}, plus the MPC/IIDC/UDC baselines.
namespace coopnet {

struct OptimizerConfig {
  int grid_points = 201;   // resolution of the shared q^a_n(T) profile
  double dual_tol = 1e-8;  // bisection tolerance on sum(T) - K
  int max_iter = 200;
  int multistart = 8;      // restarts of the projected-gradient fallback
  std::uint64_t seed = 0;

  void validate() const;
};

struct OptimizationReport {
  PlacementVector t_star;
  double objective = 0.0;
  std::string method;       // "dual-bisection" or "projected-gradient"
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Euclidean projection onto {0 <= x <= 1, sum x = k}: clip(v - mu, 0, 1)
// with mu found by bisection.
std::vector<double> project_capped_simplex(const std::vector<double>& v, double k);

PlacementVector baseline_mpc(const ContentCatalog& catalog, int k);
PlacementVector baseline_udc(const ContentCatalog& catalog, int k);
// Marginals of popularity-weighted sampling of K distinct files, estimated
// by simulation and repaired onto the constraint set.
PlacementVector baseline_iidc(const ContentCatalog& catalog, int k,
                              std::uint64_t draws = 1000000, std::uint64_t seed = 20240501);

// Maximize sum_n a_n f(T_n) over the capped simplex, where f is the shared
// per-file STP profile. Primary path: dual bisection with per-coordinate
// 1-D grid+golden-section argmax; fallback: projected gradient ascent with
// multistart. The better objective wins.
OptimizationReport optimize_placement(const ContentCatalog& catalog, int k_cache,
                                      const NetworkParams& params, const CoopTermTable& table,
                                      const QuadratureSpec& spec, const OptimizerConfig& cfg = {});

} // namespace coopnet

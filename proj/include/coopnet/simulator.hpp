#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "coopnet/model.hpp"

// Monte Carlo ground truth: PPP networks, probabilistic caches, Rayleigh
// fading, and the three-case cooperation policy. Every random draw is a
// counter-based function of (seed, realization, BS, slot), so estimates are
// byte-identical regardless of thread count.
namespace coopnet {

struct SimConfig {
  double window_side = 1000.0;
  std::uint64_t n_realizations = 100000;
  std::uint64_t seed = 1;
  bool per_file_conditioning = true;

  void validate(const NetworkParams& params) const;
};

// One sampled network instance, fully materialized (tests and tracing).
struct Realization {
  std::vector<double> bs_x, bs_y;
  std::vector<std::vector<int>> caches; // per BS, K distinct file indices (0-based)
  std::vector<int> cluster;             // M nearest BS indices, distance ascending
  std::vector<int> coop_set;            // cluster members caching the requested file
  std::vector<int> serving;             // serving BS indices per policy
  std::vector<double> fading_amp;       // |h| per BS (serving links)
  std::vector<double> fading_pow;       // |h w|^2 per BS (interfering links)
  double sir = 0.0;
  bool case3_exhausted = false; // no BS in the window caches the file
};

// Poisson point set on the square of side `window_side` centered at the
// origin. Points are a pure function of (seed-derived key).
void sample_ppp(double lambda, double window_side, std::uint64_t key, std::vector<double>& xs,
                std::vector<double>& ys);

// K distinct files via the interval method: segments of lengths T_n laid
// along [0, K]; one uniform offset picks the segments hit by U, U+1, ...
std::vector<int> sample_cache(const PlacementVector& placement, double u);

// O(1) membership test of the same cache draw.
bool cache_contains(const std::vector<double>& prefix, double u, int file);
std::vector<double> cache_prefix_sums(const PlacementVector& placement);

Realization simulate_realization(const NetworkParams& params, const SimConfig& sim,
                                 const PlacementVector& placement, int requested_file,
                                 std::uint64_t realization_idx);

// Optional per-realization trace: line-delimited records
// "realization,file,c_n,sir,success", emitted in realization order.
using TraceSink = std::function<void(const std::string& line)>;

StpResult estimate_stp(const NetworkParams& params, const SimConfig& sim,
                       const PlacementVector& placement, const ContentCatalog& catalog,
                       int n_threads = 1, const TraceSink& trace = nullptr);

// Grid estimator sharing realizations across SIR thresholds and cluster
// sizes: one pass over the sampled networks fills the whole (m, tau) grid.
// cell(m_idx, tau_idx) layout is row-major in m.
struct McGridCell {
  double aggregate = 0.0;
  double se = 0.0;
  std::uint64_t case3_exhausted = 0;
};

std::vector<McGridCell> estimate_stp_grid(const NetworkParams& base, const SimConfig& sim,
                                          const PlacementVector& placement,
                                          const ContentCatalog& catalog,
                                          const std::vector<int>& m_values,
                                          const std::vector<double>& tau_values,
                                          int n_threads = 1);

// Wilson 95% confidence half-width for k successes in n trials.
double wilson_halfwidth(std::uint64_t k, std::uint64_t n);

} // namespace coopnet

#include "coopnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coopnet/kernels.hpp"
#include "coopnet/parallel.hpp"
#include "coopnet/rng.hpp"

namespace coopnet {

namespace {

// Per-BS draw slots; every value is a pure function of (seed, realization, BS).
enum Slot : std::uint64_t {
  kSlotX = 0,
  kSlotY = 1,
  kSlotCache = 2,
  kSlotInterfPow = 3, // |h w|^2 of an interfering link, Exp(1)
  kSlotServeAmp = 4,  // |h|^2 of a serving link, Exp(1); amplitude is its sqrt
};

constexpr std::uint64_t kRealizationSalt = 0xA11CEull;
constexpr std::uint64_t kCountSalt = 0xC0C0ull;
constexpr std::uint64_t kRequestSalt = 0xF11Eull;
constexpr std::uint64_t kBlockSize = 256;

double serve_amp(std::uint64_t bs_key) {
  return std::sqrt(rng::exponential(rng::mix(bs_key, kSlotServeAmp)));
}

// Reusable per-thread workspace for one sampled network.
struct Workspace {
  std::vector<double> xs, ys, d2, w, e, u_cache;
  std::vector<std::uint64_t> bs_key;
  std::vector<std::uint32_t> order;
  double i_total = 0.0;
  std::uint64_t real_key = 0;

  void build(const NetworkParams& params, const SimConfig& sim, std::uint64_t realization_idx) {
    real_key = rng::mix(sim.seed, realization_idx, kRealizationSalt);
    rng::Stream count_stream(rng::mix(real_key, kCountSalt));
    const double mean = params.lambda_b * sim.window_side * sim.window_side;
    const std::size_t n = (std::size_t)count_stream.next_poisson(mean);
    xs.resize(n);
    ys.resize(n);
    d2.resize(n);
    w.resize(n);
    e.resize(n);
    u_cache.resize(n);
    bs_key.resize(n);
    order.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
      const std::uint64_t kb = rng::mix(real_key, b);
      bs_key[b] = kb;
      xs[b] = (rng::uniform(rng::mix(kb, kSlotX)) - 0.5) * sim.window_side;
      ys[b] = (rng::uniform(rng::mix(kb, kSlotY)) - 0.5) * sim.window_side;
      double u = rng::uniform(rng::mix(kb, kSlotCache));
      u_cache[b] = u == 1.0 ? 0.0 : u;
      e[b] = rng::exponential(rng::mix(kb, kSlotInterfPow));
    }
    kernels::squared_norms(xs.data(), ys.data(), d2.data(), n);
    kernels::pathloss_from_d2(d2.data(), w.data(), n, params.alpha);
    i_total = kernels::weighted_sum(w.data(), e.data(), n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t c) {
      return d2[a] != d2[c] ? d2[a] < d2[c] : a < c;
    });
  }

  // Interference of all BSs outside the m nearest.
  double interference_outside(int m) const {
    double i_out = i_total;
    for (int i = 0; i < m && i < (int)order.size(); ++i) {
      const std::uint32_t b = order[(std::size_t)i];
      i_out -= w[b] * e[b];
    }
    return i_out;
  }
};

struct SirOutcome {
  double sir = 0.0;
  int c_n = 0;
  bool exhausted = false;
};

// Three-case policy for cluster size m and 0-based file index.
SirOutcome compute_sir(const Workspace& ws, const std::vector<double>& prefix, int m, int file,
                       double i_out, double t_n) {
  SirOutcome out;
  const std::size_t n = ws.order.size();
  if ((std::size_t)m > n) { // undersampled window; counted as failure
    out.exhausted = true;
    return out;
  }
  double amp = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::uint32_t b = ws.order[(std::size_t)i];
    if (cache_contains(prefix, ws.u_cache[b], file)) {
      ++out.c_n;
      amp += std::sqrt(ws.w[b]) * serve_amp(ws.bs_key[b]);
    }
  }
  double signal, interf;
  if (out.c_n > 0) {
    // Cases 1-2: the cooperative set co-phases; the rest of the cluster is silent.
    signal = amp * amp;
    interf = i_out;
  } else {
    if (t_n <= 0.0) return out; // structurally impossible; plain failure
    std::size_t i = (std::size_t)m;
    for (; i < n; ++i) {
      const std::uint32_t b = ws.order[i];
      if (cache_contains(prefix, ws.u_cache[b], file)) break;
    }
    if (i == n) {
      out.exhausted = true;
      return out;
    }
    const std::uint32_t b0 = ws.order[i];
    const double a0 = serve_amp(ws.bs_key[b0]);
    signal = ws.w[b0] * a0 * a0;
    interf = i_out - ws.w[b0] * ws.e[b0];
  }
  out.sir = interf > 0.0 ? signal / interf : std::numeric_limits<double>::infinity();
  return out;
}

int sample_request(const ContentCatalog& catalog, std::uint64_t real_key) {
  const double u = rng::uniform(rng::mix(real_key, kRequestSalt));
  double acc = 0.0;
  for (int i = 0; i < catalog.n_files; ++i) {
    acc += catalog.popularity[(std::size_t)i];
    if (u <= acc) return i;
  }
  return catalog.n_files - 1;
}

} // namespace

void SimConfig::validate(const NetworkParams& params) const {
  if (!(window_side > 0.0)) throw std::invalid_argument("SimConfig: window_side must be > 0");
  if (n_realizations < 1) throw std::invalid_argument("SimConfig: n_realizations must be >= 1");
  const double expected = params.lambda_b * window_side * window_side;
  if (expected < 10.0 * params.m_coop) {
    std::fprintf(stderr,
                 "warning: expected BS count %.1f < 10*M=%d; cluster undersampled\n",
                 expected, 10 * params.m_coop);
  }
}

void sample_ppp(double lambda, double window_side, std::uint64_t key, std::vector<double>& xs,
                std::vector<double>& ys) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_ppp: lambda must be > 0");
  rng::Stream count_stream(rng::mix(key, kCountSalt));
  const std::size_t n = (std::size_t)count_stream.next_poisson(lambda * window_side * window_side);
  xs.resize(n);
  ys.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    const std::uint64_t kb = rng::mix(key, b);
    xs[b] = (rng::uniform(rng::mix(kb, kSlotX)) - 0.5) * window_side;
    ys[b] = (rng::uniform(rng::mix(kb, kSlotY)) - 0.5) * window_side;
  }
}

std::vector<double> cache_prefix_sums(const PlacementVector& placement) {
  std::vector<double> prefix(placement.t.size() + 1, 0.0);
  for (std::size_t i = 0; i < placement.t.size(); ++i) prefix[i + 1] = prefix[i] + placement.t[i];
  return prefix;
}

bool cache_contains(const std::vector<double>& prefix, double u, int file) {
  const double lo = prefix[(std::size_t)file];
  const double hi = prefix[(std::size_t)file + 1];
  double j = std::ceil(lo - u);
  if (j < 0.0) j = 0.0;
  // ceil works on the rounded difference; pin j to the smallest integer with
  // u + j >= lo under the same float comparison the segment lookup uses
  while (u + j < lo) j += 1.0;
  while (j >= 1.0 && u + (j - 1.0) >= lo) j -= 1.0;
  // only the points u, u+1, ..., u+K-1 exist
  return j < std::round(prefix.back()) && u + j < hi;
}

std::vector<int> sample_cache(const PlacementVector& placement, double u) {
  require_valid_placement(placement);
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("sample_cache: u must be in [0, 1)");
  const std::vector<double> prefix = cache_prefix_sums(placement);
  std::vector<int> files;
  files.reserve((std::size_t)placement.k_cache);
  for (int j = 0; j < placement.k_cache; ++j) {
    const double point = u + j;
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), point);
    int idx = (int)(it - prefix.begin()) - 1;
    if (idx >= placement.n_files()) idx = placement.n_files() - 1;
    files.push_back(idx);
  }
  return files;
}

Realization simulate_realization(const NetworkParams& params, const SimConfig& sim,
                                 const PlacementVector& placement, int requested_file,
                                 std::uint64_t realization_idx) {
  params.validate();
  require_valid_placement(placement);
  if (requested_file < 0 || requested_file >= placement.n_files()) {
    throw std::invalid_argument("simulate_realization: bad file index");
  }
  Workspace ws;
  ws.build(params, sim, realization_idx);
  const std::vector<double> prefix = cache_prefix_sums(placement);
  const int m = params.m_coop;

  Realization r;
  r.bs_x = ws.xs;
  r.bs_y = ws.ys;
  const std::size_t n = ws.order.size();
  r.caches.resize(n);
  r.fading_amp.resize(n);
  r.fading_pow.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    r.caches[b] = sample_cache(placement, ws.u_cache[b]);
    r.fading_amp[b] = serve_amp(ws.bs_key[b]);
    r.fading_pow[b] = ws.e[b];
  }
  for (int i = 0; i < m && i < (int)n; ++i) r.cluster.push_back((int)ws.order[(std::size_t)i]);
  for (int b : r.cluster) {
    if (cache_contains(prefix, ws.u_cache[(std::size_t)b], requested_file)) {
      r.coop_set.push_back(b);
    }
  }
  const SirOutcome out = compute_sir(ws, prefix, m, requested_file, ws.interference_outside(m),
                                     placement.t[(std::size_t)requested_file]);
  r.sir = out.sir;
  r.case3_exhausted = out.exhausted;
  if (!r.coop_set.empty()) {
    r.serving = r.coop_set;
  } else if (!out.exhausted && placement.t[(std::size_t)requested_file] > 0.0) {
    for (std::size_t i = (std::size_t)m; i < n; ++i) {
      const std::uint32_t b = ws.order[i];
      if (cache_contains(prefix, ws.u_cache[b], requested_file)) {
        r.serving.push_back((int)b);
        break;
      }
    }
  }
  return r;
}

StpResult estimate_stp(const NetworkParams& params, const SimConfig& sim,
                       const PlacementVector& placement, const ContentCatalog& catalog,
                       int n_threads, const TraceSink& trace) {
  params.validate();
  sim.validate(params);
  require_valid_placement(placement);
  catalog.validate();
  if (placement.n_files() != catalog.n_files) {
    throw std::invalid_argument("estimate_stp: placement/catalog size mismatch");
  }
  const std::vector<double> prefix = cache_prefix_sums(placement);
  const int n_files = catalog.n_files;
  const int m = params.m_coop;
  const std::uint64_t R = sim.n_realizations;
  const std::uint64_t n_blocks = (R + kBlockSize - 1) / kBlockSize;

  struct Block {
    std::vector<std::uint64_t> success;
    std::vector<std::uint64_t> trials;
    double sum_s = 0.0, sum_s2 = 0.0;
    std::uint64_t exhausted = 0;
    std::vector<std::string> trace_lines;
  };
  std::vector<Block> blocks((std::size_t)n_blocks);

  parallel_blocks(n_blocks, n_threads, [&](std::uint64_t blk) {
    Block& acc = blocks[(std::size_t)blk];
    acc.success.assign((std::size_t)n_files, 0);
    acc.trials.assign((std::size_t)n_files, 0);
    thread_local Workspace ws;
    const std::uint64_t lo = blk * kBlockSize;
    const std::uint64_t hi = std::min(R, lo + kBlockSize);
    std::ostringstream lines;
    for (std::uint64_t r = lo; r < hi; ++r) {
      ws.build(params, sim, r);
      const double i_out = ws.interference_outside(m);
      double s_agg = 0.0;
      auto run_file = [&](int n) {
        const SirOutcome out =
            compute_sir(ws, prefix, m, n, i_out, placement.t[(std::size_t)n]);
        const bool success = out.sir >= params.tau;
        acc.trials[(std::size_t)n] += 1;
        acc.success[(std::size_t)n] += success ? 1 : 0;
        acc.exhausted += out.exhausted ? 1 : 0;
        if (trace) {
          lines << r << ',' << (n + 1) << ',' << out.c_n << ',' << out.sir << ','
                << (success ? 1 : 0) << '\n';
        }
        return success;
      };
      if (sim.per_file_conditioning) {
        for (int n = 0; n < n_files; ++n) {
          const bool success = run_file(n);
          s_agg += success ? catalog.popularity[(std::size_t)n] : 0.0;
        }
      } else {
        const int n = sample_request(catalog, ws.real_key);
        s_agg = run_file(n) ? 1.0 : 0.0;
      }
      acc.sum_s += s_agg;
      acc.sum_s2 += s_agg * s_agg;
    }
    if (trace) acc.trace_lines.push_back(lines.str());
  });

  StpResult res;
  res.engine = StpEngine::monte_carlo;
  res.n_realizations = R;
  res.per_file.assign((std::size_t)n_files, 0.0);
  res.per_file_error.assign((std::size_t)n_files, 0.0);
  std::vector<std::uint64_t> success((std::size_t)n_files, 0), trials((std::size_t)n_files, 0);
  double sum_s = 0.0, sum_s2 = 0.0;
  for (const Block& b : blocks) { // fixed combine order
    for (int n = 0; n < n_files; ++n) {
      success[(std::size_t)n] += b.success[(std::size_t)n];
      trials[(std::size_t)n] += b.trials[(std::size_t)n];
    }
    sum_s += b.sum_s;
    sum_s2 += b.sum_s2;
    res.case3_exhausted += b.exhausted;
    if (trace) {
      for (const std::string& s : b.trace_lines) trace(s);
    }
  }
  for (int n = 0; n < n_files; ++n) {
    const std::uint64_t t = trials[(std::size_t)n];
    res.per_file[(std::size_t)n] = t ? (double)success[(std::size_t)n] / (double)t : 0.0;
    res.per_file_error[(std::size_t)n] = t ? wilson_halfwidth(success[(std::size_t)n], t) : 0.0;
  }
  res.aggregate = sum_s / (double)R;
  if (R > 1) {
    const double var = (sum_s2 - sum_s * sum_s / (double)R) / (double)(R - 1);
    res.error = std::sqrt(std::max(0.0, var) / (double)R);
  }
  return res;
}

std::vector<McGridCell> estimate_stp_grid(const NetworkParams& base, const SimConfig& sim,
                                          const PlacementVector& placement,
                                          const ContentCatalog& catalog,
                                          const std::vector<int>& m_values,
                                          const std::vector<double>& tau_values, int n_threads) {
  base.validate();
  sim.validate(base);
  require_valid_placement(placement);
  catalog.validate();
  if (m_values.empty() || tau_values.empty()) {
    throw std::invalid_argument("estimate_stp_grid: empty grid");
  }
  for (int m : m_values) {
    if (m < 1) throw std::invalid_argument("estimate_stp_grid: m must be >= 1");
  }
  const std::vector<double> prefix = cache_prefix_sums(placement);
  const int n_files = catalog.n_files;
  const std::size_t n_m = m_values.size();
  const std::size_t n_tau = tau_values.size();
  const std::uint64_t R = sim.n_realizations;
  const std::uint64_t n_blocks = (R + kBlockSize - 1) / kBlockSize;

  struct Block {
    std::vector<double> sum_s, sum_s2;     // n_m * n_tau
    std::vector<std::uint64_t> exhausted;  // n_m
  };
  std::vector<Block> blocks((std::size_t)n_blocks);

  parallel_blocks(n_blocks, n_threads, [&](std::uint64_t blk) {
    Block& acc = blocks[(std::size_t)blk];
    acc.sum_s.assign(n_m * n_tau, 0.0);
    acc.sum_s2.assign(n_m * n_tau, 0.0);
    acc.exhausted.assign(n_m, 0);
    thread_local Workspace ws;
    std::vector<double> sir((std::size_t)n_files);
    const std::uint64_t lo = blk * kBlockSize;
    const std::uint64_t hi = std::min(R, lo + kBlockSize);
    for (std::uint64_t r = lo; r < hi; ++r) {
      ws.build(base, sim, r);
      for (std::size_t mi = 0; mi < n_m; ++mi) {
        const int m = m_values[mi];
        const double i_out = ws.interference_outside(m);
        for (int n = 0; n < n_files; ++n) {
          const SirOutcome out =
              compute_sir(ws, prefix, m, n, i_out, placement.t[(std::size_t)n]);
          sir[(std::size_t)n] = out.sir;
          acc.exhausted[mi] += out.exhausted ? 1 : 0;
        }
        for (std::size_t ti = 0; ti < n_tau; ++ti) {
          double s = 0.0;
          for (int n = 0; n < n_files; ++n) {
            if (sir[(std::size_t)n] >= tau_values[ti]) s += catalog.popularity[(std::size_t)n];
          }
          acc.sum_s[mi * n_tau + ti] += s;
          acc.sum_s2[mi * n_tau + ti] += s * s;
        }
      }
    }
  });

  std::vector<McGridCell> cells(n_m * n_tau);
  std::vector<double> sum_s(n_m * n_tau, 0.0), sum_s2(n_m * n_tau, 0.0);
  std::vector<std::uint64_t> exhausted(n_m, 0);
  for (const Block& b : blocks) {
    for (std::size_t i = 0; i < n_m * n_tau; ++i) {
      sum_s[i] += b.sum_s[i];
      sum_s2[i] += b.sum_s2[i];
    }
    for (std::size_t mi = 0; mi < n_m; ++mi) exhausted[mi] += b.exhausted[mi];
  }
  for (std::size_t mi = 0; mi < n_m; ++mi) {
    for (std::size_t ti = 0; ti < n_tau; ++ti) {
      McGridCell& c = cells[mi * n_tau + ti];
      c.aggregate = sum_s[mi * n_tau + ti] / (double)R;
      if (R > 1) {
        const double var =
            (sum_s2[mi * n_tau + ti] - sum_s[mi * n_tau + ti] * sum_s[mi * n_tau + ti] / (double)R) /
            (double)(R - 1);
        c.se = std::sqrt(std::max(0.0, var) / (double)R);
      }
      c.case3_exhausted = exhausted[mi];
    }
  }
  return cells;
}

double wilson_halfwidth(std::uint64_t k, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double z = 1.959963984540054; // 95%
  const double p = (double)k / (double)n;
  const double z2n = z * z / (double)n;
  return z * std::sqrt(p * (1.0 - p) / (double)n + z2n / (4.0 * (double)n)) / (1.0 + z2n);
}

} // namespace coopnet

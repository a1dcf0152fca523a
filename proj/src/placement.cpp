#include "coopnet/placement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "coopnet/parallel.hpp"
#include "coopnet/rng.hpp"

namespace coopnet {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

} // namespace

void OptimizerConfig::validate() const {
  if (grid_points < 21) throw std::invalid_argument("OptimizerConfig: grid_points must be >= 21");
  if (!(dual_tol > 0.0)) throw std::invalid_argument("OptimizerConfig: dual_tol must be > 0");
  if (max_iter < 1 || multistart < 0) throw std::invalid_argument("OptimizerConfig: bad limits");
}

std::vector<double> project_capped_simplex(const std::vector<double>& v, double k) {
  const double n = (double)v.size();
  if (!(k >= 0.0 && k <= n)) {
    throw std::invalid_argument("project_capped_simplex: k out of [0, len(v)]");
  }
  auto sum_at = [&](double mu) {
    double s = 0.0;
    for (double x : v) s += clip01(x - mu);
    return s;
  };
  double lo = *std::min_element(v.begin(), v.end()) - 1.0;
  double hi = *std::max_element(v.begin(), v.end());
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sum_at(mid) > k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = clip01(v[i] - mu);
  // Distribute the bisection residual over unsaturated coordinates.
  double gap = k - std::accumulate(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < out.size() && std::fabs(gap) > 1e-15; ++i) {
    const double room = gap > 0.0 ? 1.0 - out[i] : out[i];
    const double step = std::copysign(std::min(std::fabs(gap), room), gap);
    out[i] += step;
    gap -= step;
  }
  return out;
}

PlacementVector baseline_mpc(const ContentCatalog& catalog, int k) {
  catalog.validate();
  if (k < 1 || k >= catalog.n_files) throw std::invalid_argument("baseline_mpc: need 1 <= K < N");
  PlacementVector p;
  p.k_cache = k;
  p.t.assign((std::size_t)catalog.n_files, 0.0);
  for (int i = 0; i < k; ++i) p.t[(std::size_t)i] = 1.0; // popularity is nonincreasing
  return p;
}

PlacementVector baseline_udc(const ContentCatalog& catalog, int k) {
  catalog.validate();
  if (k < 1 || k >= catalog.n_files) throw std::invalid_argument("baseline_udc: need 1 <= K < N");
  PlacementVector p;
  p.k_cache = k;
  p.t.assign((std::size_t)catalog.n_files, (double)k / catalog.n_files);
  return p;
}

PlacementVector baseline_iidc(const ContentCatalog& catalog, int k, std::uint64_t draws,
                              std::uint64_t seed) {
  catalog.validate();
  if (k < 1 || k >= catalog.n_files) throw std::invalid_argument("baseline_iidc: need 1 <= K < N");
  const std::size_t n = (std::size_t)catalog.n_files;
  // Weighted sampling without replacement via exponential keys
  // (Efraimidis-Spirakis): the K smallest -ln(U)/a_n win the cache slots.
  const std::uint64_t block = 4096;
  const std::uint64_t n_blocks = (draws + block - 1) / block;
  std::vector<std::vector<std::uint64_t>> counts((std::size_t)n_blocks);
  parallel_blocks(n_blocks, 4, [&](std::uint64_t blk) {
    auto& c = counts[(std::size_t)blk];
    c.assign(n, 0);
    std::vector<double> key(n);
    std::vector<std::uint32_t> idx(n);
    const std::uint64_t lo = blk * block;
    const std::uint64_t hi = std::min(draws, lo + block);
    for (std::uint64_t d = lo; d < hi; ++d) {
      const std::uint64_t kd = rng::mix(seed, d);
      for (std::size_t i = 0; i < n; ++i) {
        key[i] = rng::exponential(rng::mix(kd, i)) / catalog.popularity[i];
      }
      std::iota(idx.begin(), idx.end(), 0u);
      std::nth_element(idx.begin(), idx.begin() + k, idx.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
      for (int j = 0; j < k; ++j) c[idx[(std::size_t)j]] += 1;
    }
  });
  std::vector<double> marg(n, 0.0);
  for (const auto& c : counts) {
    for (std::size_t i = 0; i < n; ++i) marg[i] += (double)c[i];
  }
  for (double& v : marg) v /= (double)draws;
  PlacementVector p;
  p.k_cache = k;
  p.t = project_capped_simplex(marg, (double)k); // repairs sampling noise only
  return p;
}

OptimizationReport optimize_placement(const ContentCatalog& catalog, int k_cache,
                                      const NetworkParams& params, const CoopTermTable& table,
                                      const QuadratureSpec& spec, const OptimizerConfig& cfg) {
  catalog.validate();
  params.validate();
  cfg.validate();
  const int n = catalog.n_files;
  if (k_cache < 1 || k_cache >= n) {
    throw std::invalid_argument("optimize_placement: need 1 <= K < N");
  }
  const double kd = (double)k_cache;
  const StpProfile profile(table, params, spec, cfg.grid_points);
  const auto& a = catalog.popularity;

  auto objective = [&](const std::vector<double>& t) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[(std::size_t)i] * profile(t[(std::size_t)i]);
    return s;
  };

  const int gp = cfg.grid_points;
  std::vector<double> grid((std::size_t)gp), fval((std::size_t)gp);
  for (int i = 0; i < gp; ++i) {
    grid[(std::size_t)i] = (double)i / (gp - 1);
    fval[(std::size_t)i] = profile(grid[(std::size_t)i]);
  }

  // argmax_{T in [0,1]} a_n f(T) - nu T: grid scan, then golden-section in
  // the bracketing cells (f may be non-concave).
  auto coord_argmax = [&](double an, double nu) {
    int best = 0;
    double best_score = an * fval[0];
    for (int i = 1; i < gp; ++i) {
      const double s = an * fval[(std::size_t)i] - nu * grid[(std::size_t)i];
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    const double lo = grid[(std::size_t)std::max(0, best - 1)];
    const double hi = grid[(std::size_t)std::min(gp - 1, best + 1)];
    auto score = [&](double t) { return an * profile(t) - nu * t; };
    const double refined = golden_max(score, lo, hi);
    return score(refined) >= best_score ? refined : grid[(std::size_t)best];
  };

  struct Candidate {
    std::vector<double> t;
    double obj = -1.0;
    const char* method = "";
    int iterations = 0;
    bool converged = true;
    double nu = 0.0;
  };
  Candidate best;

  auto consider = [&](std::vector<double> t, const char* method, int iters, bool conv, double nu) {
    // Canonical form: nonincreasing coordinates (popularity is
    // nonincreasing and f is evaluated per coordinate, so sorting cannot
    // lower the objective when f is nondecreasing; keep whichever scores
    // higher).
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    if (objective(sorted) >= objective(t)) t = std::move(sorted);
    const double obj = objective(t);
    if (obj > best.obj) best = {std::move(t), obj, method, iters, conv, nu};
  };

  // --- primary path: dual bisection on the sum multiplier ---
  {
    std::vector<double> t((std::size_t)n);
    auto fill = [&](double nu) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        t[(std::size_t)i] = coord_argmax(a[(std::size_t)i], nu);
        sum += t[(std::size_t)i];
      }
      return sum;
    };
    double nu_lo = 0.0; // f nondecreasing => sum(0) = N >= K
    double nu_hi = 1.0;
    for (int i = 0; i < n; ++i) nu_hi = std::max(nu_hi, 2.0 * a[(std::size_t)i]);
    int guard = 0;
    while (fill(nu_hi) > kd && guard++ < 64) nu_hi *= 2.0;
    int iters = 0;
    double sum = fill(0.5 * (nu_lo + nu_hi));
    double nu = 0.5 * (nu_lo + nu_hi);
    for (; iters < cfg.max_iter && std::fabs(sum - kd) > cfg.dual_tol; ++iters) {
      if (sum > kd) {
        nu_lo = nu;
      } else {
        nu_hi = nu;
      }
      nu = 0.5 * (nu_lo + nu_hi);
      sum = fill(nu);
    }
    const bool converged = std::fabs(sum - kd) <= cfg.dual_tol;
    std::vector<double> sol = t;
    if (!converged) sol = project_capped_simplex(sol, kd); // repair a dual jump
    consider(std::move(sol), "dual-bisection", iters, converged, nu);
  }
  const double nu_star = best.nu;

  // --- fallback path: projected gradient ascent with multistart ---
  {
    auto pga = [&](std::vector<double> t) {
      t = project_capped_simplex(t, kd);
      double obj = objective(t);
      int it = 0;
      for (; it < cfg.max_iter; ++it) {
        std::vector<double> g((std::size_t)n);
        for (int i = 0; i < n; ++i) {
          g[(std::size_t)i] = a[(std::size_t)i] * profile.derivative(t[(std::size_t)i]);
        }
        double step = 64.0;
        bool improved = false;
        while (step > 1e-10) {
          std::vector<double> trial((std::size_t)n);
          for (int i = 0; i < n; ++i) trial[(std::size_t)i] = t[(std::size_t)i] + step * g[(std::size_t)i];
          trial = project_capped_simplex(trial, kd);
          const double trial_obj = objective(trial);
          if (trial_obj > obj + 1e-14) {
            t = std::move(trial);
            obj = trial_obj;
            improved = true;
            break;
          }
          step *= 0.25;
        }
        if (!improved) break;
      }
      consider(std::move(t), "projected-gradient", it, true, nu_star);
    };
    pga(baseline_udc(catalog, k_cache).t);
    pga(baseline_mpc(catalog, k_cache).t);
    for (int s = 0; s < cfg.multistart; ++s) {
      std::vector<double> t((std::size_t)n);
      for (int i = 0; i < n; ++i) t[(std::size_t)i] = rng::uniform(rng::mix(cfg.seed, s, i));
      pga(std::move(t));
    }
  }
  // Feasible baselines are legitimate candidates too.
  consider(baseline_iidc(catalog, k_cache).t, "baseline-iidc", 0, true, nu_star);

  OptimizationReport rep;
  rep.t_star.t = project_capped_simplex(best.t, kd);
  rep.t_star.k_cache = k_cache;
  rep.objective = objective(rep.t_star.t);
  rep.method = best.method;
  rep.iterations = best.iterations;
  rep.converged = best.converged;
  // Stationarity residual against the dual multiplier: interior coordinates
  // should satisfy a_n f'(T_n) = nu; boundary ones the matching inequality.
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = rep.t_star.t[(std::size_t)i];
    const double d = a[(std::size_t)i] * profile.derivative(t);
    if (t <= 1e-9) {
      res = std::max(res, std::max(0.0, d - nu_star));
    } else if (t >= 1.0 - 1e-9) {
      res = std::max(res, std::max(0.0, nu_star - d));
    } else {
      res = std::max(res, std::fabs(d - nu_star));
    }
  }
  rep.kkt_residual = res;
  return rep;
}

} // namespace coopnet

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "coopnet/simulator.hpp"

using namespace coopnet;

namespace {

PlacementVector make_placement(std::vector<double> t, int k) {
  PlacementVector p;
  p.t = std::move(t);
  p.k_cache = k;
  return p;
}

} // namespace

TEST_CASE("ppp sampler: count statistics and determinism") {
  std::vector<double> xs, ys;
  const double lambda = 0.002, side = 400.0;
  const double mean = lambda * side * side; // 320
  const int reps = 3000;
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    sample_ppp(lambda, side, 1000 + (std::uint64_t)r, xs, ys);
    sum += (double)xs.size();
    sum2 += (double)xs.size() * (double)xs.size();
    for (double x : xs) {
      CHECK(x >= -side / 2);
      CHECK(x <= side / 2);
    }
  }
  const double m = sum / reps;
  const double var = sum2 / reps - m * m;
  CHECK(m == doctest::Approx(mean).epsilon(0.02));
  CHECK(var == doctest::Approx(mean).epsilon(0.10));

  std::vector<double> xs2, ys2;
  sample_ppp(lambda, side, 1234, xs, ys);
  sample_ppp(lambda, side, 1234, xs2, ys2);
  CHECK(xs == xs2);
  CHECK(ys == ys2);
}

TEST_CASE("cache sampler: exactly K distinct files, deterministic intervals") {
  const PlacementVector p = make_placement({0.9, 0.8, 0.6, 0.4, 0.2, 0.1, 0.0, 0.0}, 3);
  for (double u : {0.0, 0.1, 0.37, 0.5, 0.73, 0.999}) {
    const auto cache = sample_cache(p, u);
    CHECK(cache.size() == 3);
    CHECK(std::set<int>(cache.begin(), cache.end()).size() == 3);
    for (int f : cache) {
      CHECK(f >= 0);
      CHECK(f < 8);
      CHECK(p.t[(std::size_t)f] > 0.0); // zero-probability files never cached
    }
  }
  // T = (1, 0.5, 0.5), K = 2: segments [0,1), [1,1.5), [1.5,2).
  const PlacementVector q = make_placement({1.0, 0.5, 0.5}, 2);
  CHECK(sample_cache(q, 0.25) == std::vector<int>{0, 1});
  CHECK(sample_cache(q, 0.75) == std::vector<int>{0, 2});
}

TEST_CASE("cache membership test agrees with the full draw") {
  const PlacementVector p = make_placement({0.9, 0.8, 0.6, 0.4, 0.2, 0.1, 0.0, 0.0}, 3);
  const auto prefix = cache_prefix_sums(p);
  for (int i = 0; i < 2000; ++i) {
    const double u = i / 2000.0;
    const auto cache = sample_cache(p, u);
    for (int f = 0; f < 8; ++f) {
      const bool in = std::find(cache.begin(), cache.end(), f) != cache.end();
      CHECK(cache_contains(prefix, u, f) == in);
    }
  }
}

TEST_CASE("cache marginals match the placement probabilities") {
  const PlacementVector p = make_placement({0.9, 0.8, 0.6, 0.4, 0.2, 0.1, 0.0, 0.0}, 3);
  const int reps = 40000;
  std::vector<int> hits(8, 0);
  for (int r = 0; r < reps; ++r) {
    const double u = (r + 0.5) / reps;
    for (int f : sample_cache(p, u)) hits[(std::size_t)f]++;
  }
  for (int f = 0; f < 8; ++f) {
    const double t = p.t[(std::size_t)f];
    const double se = std::sqrt(t * (1.0 - t) / reps) + 1e-9;
    CHECK(std::abs(hits[(std::size_t)f] / (double)reps - t) <= 3.0 * se + 1.0 / reps);
  }
}

TEST_CASE("cooperative set size follows Binomial(M, T_n)") {
  NetworkParams params;
  params.lambda_b = 0.002;
  params.m_coop = 3;
  SimConfig sim;
  sim.window_side = 400.0;
  sim.seed = 7;
  const double t_n = 0.6;
  const PlacementVector p = make_placement({t_n, 1.0 - t_n}, 1);

  const int reps = 4000;
  std::vector<double> observed(4, 0.0);
  for (int r = 0; r < reps; ++r) {
    const Realization real = simulate_realization(params, sim, p, 0, (std::uint64_t)r);
    REQUIRE(real.cluster.size() == 3);
    observed[real.coop_set.size()] += 1.0;
  }
  double chi2 = 0.0;
  for (int c = 0; c <= 3; ++c) {
    double pc = 1.0;
    for (int i = 0; i < c; ++i) pc *= t_n;
    for (int i = c; i < 3; ++i) pc *= 1.0 - t_n;
    double comb = 1.0;
    if (c == 1 || c == 2) comb = 3.0;
    const double expected = reps * comb * pc;
    chi2 += (observed[(std::size_t)c] - expected) * (observed[(std::size_t)c] - expected) / expected;
  }
  CHECK(chi2 < 11.345); // chi-square df=3 critical value at p = 0.01
}

TEST_CASE("nearest-BS coverage special case: 1/(1 + pi/4) at M=1, tau=1, alpha=4") {
  NetworkParams params;
  params.lambda_b = 0.01;
  params.alpha = 4.0;
  params.m_coop = 1;
  params.tau = 1.0;
  SimConfig sim;
  sim.window_side = 600.0;
  sim.n_realizations = 20000;
  sim.seed = 3;
  const ContentCatalog catalog = ContentCatalog::make(2, 0.0);
  const PlacementVector p = make_placement({1.0, 0.0}, 1);
  const StpResult r = estimate_stp(params, sim, p, catalog, 1);
  const double target = 1.0 / (1.0 + M_PI / 4.0);
  CHECK(std::abs(r.per_file[0] - target) <= 3.0 * r.per_file_error[0] / 1.96 + 0.003);
  CHECK(r.per_file[1] == 0.0); // T = 0: never cached, never served
}

TEST_CASE("estimates are deterministic in the seed and the thread count") {
  NetworkParams params;
  params.lambda_b = 0.002;
  SimConfig sim;
  sim.window_side = 400.0;
  sim.n_realizations = 2000;
  sim.seed = 99;
  const ContentCatalog catalog = ContentCatalog::make(4, 1.0);
  const PlacementVector p = make_placement({0.9, 0.6, 0.4, 0.1}, 2);

  const StpResult a = estimate_stp(params, sim, p, catalog, 1);
  const StpResult b = estimate_stp(params, sim, p, catalog, 1);
  const StpResult c = estimate_stp(params, sim, p, catalog, 4);
  CHECK(a.aggregate == b.aggregate);
  CHECK(a.aggregate == c.aggregate);
  CHECK(a.error == c.error);
  CHECK(a.per_file == c.per_file);

  sim.seed = 100;
  const StpResult d = estimate_stp(params, sim, p, catalog, 1);
  CHECK(a.aggregate != d.aggregate);
}

TEST_CASE("grid estimator matches the point estimator bit for bit") {
  NetworkParams params;
  params.lambda_b = 0.002;
  params.m_coop = 2;
  params.tau = db_to_linear(5.0);
  SimConfig sim;
  sim.window_side = 400.0;
  sim.n_realizations = 2000;
  sim.seed = 42;
  const ContentCatalog catalog = ContentCatalog::make(4, 1.0);
  const PlacementVector p = make_placement({0.9, 0.6, 0.4, 0.1}, 2);

  const StpResult point = estimate_stp(params, sim, p, catalog, 1);
  const auto cells = estimate_stp_grid(params, sim, p, catalog, {1, 2, 3},
                                       {db_to_linear(-5.0), params.tau}, 2);
  REQUIRE(cells.size() == 6);
  CHECK(cells[1 * 2 + 1].aggregate == point.aggregate);
  CHECK(cells[1 * 2 + 1].se == point.error);
  // More cooperation and lower threshold can only help.
  CHECK(cells[0 * 2 + 1].aggregate <= cells[1 * 2 + 1].aggregate);
  CHECK(cells[1 * 2 + 0].aggregate >= cells[1 * 2 + 1].aggregate);
}

TEST_CASE("joint transmission beats the strongest single link in every realization") {
  NetworkParams params;
  params.lambda_b = 0.002;
  params.m_coop = 3;
  SimConfig sim;
  sim.window_side = 400.0;
  const PlacementVector p = make_placement({1.0, 0.0}, 1);
  // T = 1: every cluster BS serves; the co-phased amplitude sum dominates
  // any single term.
  for (std::uint64_t r = 0; r < 50; ++r) {
    const Realization full = simulate_realization(params, sim, p, 0, r);
    NetworkParams solo = params;
    solo.m_coop = 1;
    const Realization single = simulate_realization(solo, sim, p, 0, r);
    CHECK(full.sir >= single.sir);
    CHECK(full.coop_set.size() == 3);
  }
}

TEST_CASE("window exhaustion is flagged when no BS caches the file") {
  NetworkParams params;
  params.lambda_b = 0.0005;
  params.m_coop = 2;
  SimConfig sim;
  sim.window_side = 200.0; // ~20 BSs
  sim.n_realizations = 500;
  sim.seed = 5;
  const ContentCatalog catalog = ContentCatalog::make(100, 0.0);
  PlacementVector p;
  p.t.assign(100, 0.01); // rare file: most windows miss it entirely
  p.k_cache = 1;
  const StpResult r = estimate_stp(params, sim, p, catalog, 1);
  CHECK(r.case3_exhausted > 0);
  CHECK(r.aggregate >= 0.0);
  CHECK(r.aggregate <= 1.0);
}

TEST_CASE("trace sink receives one record per (realization, file)") {
  NetworkParams params;
  params.lambda_b = 0.002;
  SimConfig sim;
  sim.window_side = 400.0;
  sim.n_realizations = 10;
  const ContentCatalog catalog = ContentCatalog::make(3, 1.0);
  const PlacementVector p = make_placement({0.9, 0.7, 0.4}, 2);
  std::string all;
  estimate_stp(params, sim, p, catalog, 1, [&](const std::string& s) { all += s; });
  CHECK(std::count(all.begin(), all.end(), '\n') == 30);
  CHECK(all.rfind("0,1,", 0) == 0); // starts at realization 0, file 1
}

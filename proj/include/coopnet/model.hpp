#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coopnet {

// Physical and topological constants of the network.
struct NetworkParams {
  double lambda_b = 0.01; // BS density per m^2
  double alpha = 4.0;     // path-loss exponent, > 2
  double p_b = 1.0;       // transmit power; cancels in SIR, never read by it
  int m_coop = 3;         // cooperation cluster size M
  double tau = 1.0;       // SIR threshold, linear

  void validate() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

// Content catalog with Zipf popularity.
struct ContentCatalog {
  int n_files = 0;
  double gamma_zipf = 0.0;
  std::vector<double> popularity;

  static ContentCatalog make(int n_files, double gamma_zipf);
  void validate() const;
};

// a_n = n^-gamma / sum_k k^-gamma; compensated summation for large N.
std::vector<double> zipf_popularity(int n_files, double gamma);

// Per-file caching probabilities with target cache size K.
struct PlacementVector {
  std::vector<double> t;
  int k_cache = 0;

  int n_files() const { return (int)t.size(); }
};

struct ConstraintViolation {
  int index;         // -1 for the sum constraint
  double magnitude;  // how far outside the constraint
  std::string what;
};

struct PlacementReport {
  std::vector<ConstraintViolation> violations;
  bool ok() const { return violations.empty(); }
};

constexpr double kPlacementBoxTol = 1e-12;
constexpr double kPlacementSumTol = 1e-9;

PlacementReport validate_placement(const PlacementVector& p);
// Throws std::invalid_argument with the report text when invalid.
void require_valid_placement(const PlacementVector& p);

enum class StpEngine { analytic, monte_carlo };

// Per-file and aggregate STP with provenance.
struct StpResult {
  StpEngine engine = StpEngine::analytic;
  double aggregate = 0.0;
  double error = 0.0; // integration error bound / MC standard error
  std::vector<double> per_file;
  std::vector<double> per_file_error; // half-widths (MC: Wilson 95% CI)
  // Monte Carlo diagnostics; zero for the analytic engine.
  std::uint64_t n_realizations = 0;
  std::uint64_t case3_exhausted = 0;
};

} // namespace coopnet

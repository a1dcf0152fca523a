#include "coopnet/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coopnet {

void NetworkParams::validate() const {
  if (!(lambda_b > 0.0)) throw std::invalid_argument("NetworkParams: lambda_b must be > 0");
  if (!(alpha > 2.0)) throw std::invalid_argument("NetworkParams: alpha must be > 2");
  if (m_coop < 1) throw std::invalid_argument("NetworkParams: m_coop must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("NetworkParams: tau must be > 0");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<double> zipf_popularity(int n_files, double gamma) {
  if (n_files < 1) throw std::invalid_argument("zipf_popularity: n_files must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("zipf_popularity: gamma must be >= 0");
  std::vector<double> a((std::size_t)n_files);
  for (int n = 1; n <= n_files; ++n) {
    a[(std::size_t)n - 1] = std::pow((double)n, -gamma);
  }
  // Kahan sum; N can be large with near-uniform weights.
  double sum = 0.0, comp = 0.0;
  for (double v : a) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  for (double& v : a) v /= sum;
  return a;
}

ContentCatalog ContentCatalog::make(int n_files, double gamma_zipf) {
  ContentCatalog c;
  c.n_files = n_files;
  c.gamma_zipf = gamma_zipf;
  c.popularity = zipf_popularity(n_files, gamma_zipf);
  return c;
}

void ContentCatalog::validate() const {
  if (n_files < 1 || (int)popularity.size() != n_files) {
    throw std::invalid_argument("ContentCatalog: bad size");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < popularity.size(); ++i) {
    if (i > 0 && popularity[i] > popularity[i - 1] + 1e-15) {
      throw std::invalid_argument("ContentCatalog: popularity not nonincreasing");
    }
    sum += popularity[i];
  }
  if (std::fabs(sum - 1.0) > 1e-9) { // naive resummation noise for large N
    throw std::invalid_argument("ContentCatalog: popularity does not sum to 1");
  }
}

PlacementReport validate_placement(const PlacementVector& p) {
  PlacementReport rep;
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < p.n_files(); ++i) {
    const double v = p.t[(std::size_t)i];
    if (v < -kPlacementBoxTol) {
      rep.violations.push_back({i, -v, "T_n below 0"});
    } else if (v > 1.0 + kPlacementBoxTol) {
      rep.violations.push_back({i, v - 1.0, "T_n above 1"});
    }
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (p.k_cache < 1) rep.violations.push_back({-1, 0.0, "k_cache must be >= 1"});
  if (p.k_cache >= p.n_files()) {
    rep.violations.push_back({-1, 0.0, "k_cache must be < n_files"});
  }
  const double gap = std::fabs(sum - (double)p.k_cache);
  if (gap > kPlacementSumTol) {
    rep.violations.push_back({-1, gap, "sum of T_n differs from K"});
  }
  return rep;
}

void require_valid_placement(const PlacementVector& p) {
  const PlacementReport rep = validate_placement(p);
  if (rep.ok()) return;
  std::ostringstream os;
  os << "invalid placement:";
  for (const auto& v : rep.violations) {
    os << " [index " << v.index << ": " << v.what << " by " << v.magnitude << "]";
  }
  throw std::invalid_argument(os.str());
}

} // namespace coopnet

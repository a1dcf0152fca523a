#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopnet/model.hpp"
#include "coopnet/placement.hpp"
#include "coopnet/quadrature.hpp"
#include "coopnet/simulator.hpp"

namespace coopnet {

enum class PlacementSource { explicit_vec, optimal, mpc, iidc, udc };
enum class RunEngine { analytic, montecarlo, both };

const char* to_string(PlacementSource s);
PlacementSource placement_source_from_string(const std::string& s);

struct SweepAxis {
  std::string axis; // tau_db | m_coop | gamma | k_cache
  std::vector<double> values;
};

struct ExperimentConfig {
  NetworkParams network;  // network.tau is linear; configs carry tau_db
  double tau_db = 0.0;
  int n_files = 100;
  double gamma_zipf = 0.8;
  int cache_k = 25;
  std::vector<PlacementSource> strategies{PlacementSource::optimal};
  std::vector<double> explicit_t;
  std::optional<SweepAxis> sweep;
  std::optional<SweepAxis> series; // per-curve legend axis (e.g. m_coop)
  RunEngine engine = RunEngine::analytic;
  SimConfig sim;
  QuadratureSpec quadrature;
  OptimizerConfig optimizer;
  std::string output_path = "out.csv";

  ContentCatalog catalog() const { return ContentCatalog::make(n_files, gamma_zipf); }
  void validate() const;
};

// Loads a JSON config. `name_or_path` may be a file path or the name of a
// bundled config (resolved against ./configs and $COOPNET_CONFIG_DIR).
// Dotted overrides like "network.tau_db=3" are applied before parsing.
ExperimentConfig load_config(const std::string& name_or_path,
                             const std::vector<std::string>& overrides = {});

ExperimentConfig parse_config_json(const std::string& json_text,
                                   const std::vector<std::string>& overrides = {});

} // namespace coopnet

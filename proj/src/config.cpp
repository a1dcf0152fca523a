#include "coopnet/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace coopnet {

namespace {

using nlohmann::json;

const std::vector<std::string> kAxes = {"tau_db", "m_coop", "gamma", "k_cache"};

void check_axis(const std::string& axis) {
  for (const auto& a : kAxes) {
    if (axis == a) return;
  }
  throw std::invalid_argument("unknown sweep axis: " + axis);
}

// "a.b.c=value" -> patch into the json tree; value parsed as JSON when
// possible, else as a string.
void apply_override(json& root, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must look like key.path=value: " + kv);
  }
  const std::string path = kv.substr(0, eq);
  const std::string raw = kv.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &root;
  std::istringstream ps(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ps, part, '.')) parts.push_back(part);
  if (parts.empty()) throw std::invalid_argument("empty override path");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  (*node)[parts.back()] = value;
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

SweepAxis parse_axis(const json& j, const char* field) {
  SweepAxis ax;
  ax.axis = j.at("axis").get<std::string>();
  check_axis(ax.axis);
  for (const auto& v : j.at("values")) ax.values.push_back(v.get<double>());
  if (ax.values.empty()) {
    throw std::invalid_argument(std::string(field) + ": values must be nonempty");
  }
  return ax;
}

} // namespace

const char* to_string(PlacementSource s) {
  switch (s) {
    case PlacementSource::explicit_vec: return "explicit";
    case PlacementSource::optimal: return "optimal";
    case PlacementSource::mpc: return "mpc";
    case PlacementSource::iidc: return "iidc";
    case PlacementSource::udc: return "udc";
  }
  return "?";
}

PlacementSource placement_source_from_string(const std::string& s) {
  if (s == "explicit") return PlacementSource::explicit_vec;
  if (s == "optimal") return PlacementSource::optimal;
  if (s == "mpc") return PlacementSource::mpc;
  if (s == "iidc") return PlacementSource::iidc;
  if (s == "udc") return PlacementSource::udc;
  throw std::invalid_argument("unknown placement source: " + s);
}

void ExperimentConfig::validate() const {
  network.validate();
  quadrature.validate();
  optimizer.validate();
  if (n_files < 1) throw std::invalid_argument("catalog.n_files must be >= 1");
  if (!(gamma_zipf >= 0.0)) throw std::invalid_argument("catalog.gamma_zipf must be >= 0");
  if (cache_k < 1 || cache_k >= n_files) throw std::invalid_argument("cache_k must be in [1, N)");
  if (strategies.empty()) throw std::invalid_argument("placement_source must be nonempty");
  for (PlacementSource s : strategies) {
    if (s == PlacementSource::explicit_vec && (int)explicit_t.size() != n_files) {
      throw std::invalid_argument("placement_t must have n_files entries");
    }
  }
  if (sweep && series && sweep->axis == series->axis) {
    throw std::invalid_argument("sweep and series must use different axes");
  }
  sim.validate(network);
}

ExperimentConfig parse_config_json(const std::string& json_text,
                                   const std::vector<std::string>& overrides) {
  json j = json::parse(json_text);
  for (const auto& kv : overrides) apply_override(j, kv);

  ExperimentConfig cfg;
  if (j.contains("network")) {
    const json& n = j["network"];
    get_if(n, "lambda_b", cfg.network.lambda_b);
    get_if(n, "alpha", cfg.network.alpha);
    get_if(n, "p_b", cfg.network.p_b);
    get_if(n, "m_coop", cfg.network.m_coop);
    get_if(n, "tau_db", cfg.tau_db);
  }
  cfg.network.tau = db_to_linear(cfg.tau_db);
  if (j.contains("catalog")) {
    const json& c = j["catalog"];
    get_if(c, "n_files", cfg.n_files);
    get_if(c, "gamma_zipf", cfg.gamma_zipf);
  }
  get_if(j, "cache_k", cfg.cache_k);
  if (j.contains("placement_source")) {
    cfg.strategies.clear();
    const json& ps = j["placement_source"];
    if (ps.is_string()) {
      cfg.strategies.push_back(placement_source_from_string(ps.get<std::string>()));
    } else {
      for (const auto& s : ps) {
        cfg.strategies.push_back(placement_source_from_string(s.get<std::string>()));
      }
    }
  }
  if (j.contains("placement_t")) {
    for (const auto& v : j["placement_t"]) cfg.explicit_t.push_back(v.get<double>());
  }
  if (j.contains("sweep")) cfg.sweep = parse_axis(j["sweep"], "sweep");
  if (j.contains("series")) cfg.series = parse_axis(j["series"], "series");
  if (j.contains("engine")) {
    const std::string e = j["engine"].get<std::string>();
    if (e == "analytic") {
      cfg.engine = RunEngine::analytic;
    } else if (e == "montecarlo") {
      cfg.engine = RunEngine::montecarlo;
    } else if (e == "both") {
      cfg.engine = RunEngine::both;
    } else {
      throw std::invalid_argument("engine must be analytic|montecarlo|both");
    }
  }
  if (j.contains("sim")) {
    const json& s = j["sim"];
    get_if(s, "window_side", cfg.sim.window_side);
    get_if(s, "n_realizations", cfg.sim.n_realizations);
    get_if(s, "seed", cfg.sim.seed);
    get_if(s, "per_file_conditioning", cfg.sim.per_file_conditioning);
  }
  if (j.contains("quadrature")) {
    const json& q = j["quadrature"];
    get_if(q, "rel_tol", cfg.quadrature.rel_tol);
    get_if(q, "abs_tol", cfg.quadrature.abs_tol);
    get_if(q, "max_evals", cfg.quadrature.max_evals);
    get_if(q, "qmc_points", cfg.quadrature.qmc_points);
  }
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    get_if(o, "grid_points", cfg.optimizer.grid_points);
    get_if(o, "dual_tol", cfg.optimizer.dual_tol);
    get_if(o, "max_iter", cfg.optimizer.max_iter);
    get_if(o, "multistart", cfg.optimizer.multistart);
    get_if(o, "seed", cfg.optimizer.seed);
  }
  get_if(j, "output_path", cfg.output_path);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& name_or_path,
                             const std::vector<std::string>& overrides) {
  namespace fs = std::filesystem;
  std::vector<fs::path> tried;
  std::vector<fs::path> candidates = {name_or_path, name_or_path + ".json",
                                      fs::path("configs") / (name_or_path + ".json")};
  if (const char* dir = std::getenv("COOPNET_CONFIG_DIR")) {
    candidates.push_back(fs::path(dir) / (name_or_path + ".json"));
    candidates.push_back(fs::path(dir) / name_or_path);
  }
  for (const auto& p : candidates) {
    tried.push_back(p);
    std::ifstream in(p);
    if (in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      return parse_config_json(buf.str(), overrides);
    }
  }
  std::ostringstream os;
  os << "config not found: " << name_or_path << " (tried:";
  for (const auto& p : tried) os << ' ' << p;
  os << ')';
  throw std::runtime_error(os.str());
}

} // namespace coopnet

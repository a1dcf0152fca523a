#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopnet/config.hpp"
#include "coopnet/kernels.hpp"
#include "coopnet/runner.hpp"

namespace {

struct CommonArgs {
  std::string config = "defaults";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int threads = 1;
  bool trace = false;
  std::string kernels;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "Config file path or bundled config name");
  cmd->add_option("--seed", a.seed, "RNG seed override");
  cmd->add_option("--out", a.out, "Output CSV path override");
  cmd->add_option("--threads", a.threads, "Worker thread count")->check(CLI::PositiveNumber);
  cmd->add_flag("--trace", a.trace, "Dump per-realization records to <out>.trace");
  cmd->add_option("--kernels", a.kernels, "Force a kernel backend (scalar|avx2)");
  cmd->add_option("overrides", a.overrides, "Dotted config overrides, e.g. network.alpha=4");
}

int dispatch(const std::string& sub, const CommonArgs& a) {
  if (!a.kernels.empty()) {
    namespace kn = coopnet::kernels;
    if (a.kernels != "scalar" && a.kernels != "avx2") {
      std::cerr << "error: unknown kernel backend '" << a.kernels << "'\n";
      return 2;
    }
    const kn::Backend b = a.kernels == "scalar" ? kn::Backend::scalar : kn::Backend::avx2;
    if (!kn::backend_supported(b)) {
      std::cerr << "error: kernel backend '" << a.kernels << "' not supported on this CPU\n";
      return 2;
    }
    kn::set_backend(b);
  }

  coopnet::ExperimentConfig cfg = coopnet::load_config(a.config, a.overrides);
  coopnet::RunOptions opts;
  opts.threads = a.threads;
  opts.seed = a.seed;
  opts.out = a.out;
  opts.trace = a.trace;

  if (sub == "analytic") {
    cfg.engine = coopnet::RunEngine::analytic;
    cfg.sweep.reset();
    cfg.series.reset();
    return coopnet::run_experiment(std::move(cfg), opts, std::cerr);
  }
  if (sub == "simulate") {
    cfg.engine = coopnet::RunEngine::montecarlo;
    cfg.sweep.reset();
    cfg.series.reset();
    return coopnet::run_experiment(std::move(cfg), opts, std::cerr);
  }
  if (sub == "sweep") {
    if (!cfg.sweep) {
      std::cerr << "error: config has no sweep axis\n";
      return 2;
    }
    return coopnet::run_experiment(std::move(cfg), opts, std::cerr);
  }
  if (sub == "optimize") return coopnet::run_optimize(std::move(cfg), opts, std::cerr);
  if (sub == "compare") return coopnet::run_compare(std::move(cfg), opts, std::cerr);
  std::cerr << "error: unknown subcommand\n";
  return 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-enabled cooperative cellular network: STP analysis and placement"};
  app.require_subcommand(1);

  const std::vector<std::string> subs = {"analytic", "simulate", "optimize", "compare", "sweep"};
  const std::vector<std::string> descs = {
      "Analytic STP at the configured operating point",
      "Monte Carlo STP at the configured operating point",
      "Optimize the content placement vector",
      "All placement strategies side by side",
      "Run the sweep configured in the config file"};
  std::vector<CommonArgs> args(subs.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i], descs[i]);
    add_common(cmd, args[i]);
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (cmds[i]->parsed()) return dispatch(subs[i], args[i]);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

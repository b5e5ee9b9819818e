// rankbandit: command-line front end for simulations, oracle queries, bound
// curves, contamination sweeps, timing tables and plots.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numeric failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rankbandit/bounds.hpp"
#include "rankbandit/config.hpp"
#include "rankbandit/errors.hpp"
#include "rankbandit/export.hpp"
#include "rankbandit/harness.hpp"
#include "rankbandit/kernels.hpp"
#include "rankbandit/serialize.hpp"

namespace fs = std::filesystem;
using namespace rankbandit;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

ExperimentConfig load(const std::string& path, const Globals& g) {
  ExperimentConfig cfg = load_experiment(path);
  if (g.seed) cfg.run_seed_base = *g.seed;
  if (g.out_dir) cfg.output.dir = *g.out_dir;
  if (g.threads) cfg.threads = *g.threads;
  return cfg;
}

BoundInputs bound_inputs(const ExperimentConfig& cfg) {
  const EnvironmentSpec env = environment_for_run(cfg, 0);
  BoundInputs in;
  in.bounds = env.bounds;
  in.d = env.d;
  in.L = env.L;
  in.w = env.w;
  for (const AgentConfig& a : cfg.agents)
    if (a.window && !a.window->weights.empty()) in.window_weights = a.window->weights;
  return in;
}

std::vector<BoundOverlay> overlays(const ExperimentConfig& cfg) {
  std::vector<BoundOverlay> out;
  if (cfg.output.bound_overlays.empty()) return out;
  const BoundInputs in = bound_inputs(cfg);
  for (int id : cfg.output.bound_overlays)
    out.push_back({"bound " + std::to_string(id), bound_curve(parse_theorem(id), in, cfg.T)});
  return out;
}

void print_summary(const std::vector<RunRecord>& records) {
  std::printf("%-16s %14s %14s %14s\n", "agent", "mean R_T", "min R_T", "max R_T");
  for (const RegretCurve& c : regret_curves(records))
    std::printf("%-16s %14.4f %14.4f %14.4f\n", c.agent.c_str(), c.mean.back(), c.min.back(),
                c.max.back());
}

int cmd_simulate(const std::string& config, const Globals& g) {
  const ExperimentConfig cfg = load(config, g);
  const auto records = run_experiment(cfg);
  const fs::path dir = cfg.output.dir;
  write_csv(dir / cfg.output.csv, records);
  write_svg(dir / cfg.output.svg, regret_curves(records), overlays(cfg));
  print_summary(records);
  std::printf("wrote %s and %s\n", (dir / cfg.output.csv).string().c_str(),
              (dir / cfg.output.svg).string().c_str());
  return 0;
}

int cmd_oracle(const std::string& config, std::size_t run, bool dump_env, const Globals& g) {
  const ExperimentConfig cfg = load(config, g);
  const EnvironmentSpec env = environment_for_run(cfg, run);
  const OracleResult best = oracle_best(env);
  std::printf("list %s\ntotal %s\n", to_string(best.list).c_str(), format_double(best.total).c_str());
  if (dump_env) std::printf("%s\n", dump_environment(env).c_str());
  return 0;
}

int cmd_bound(int theorem, const std::string& config, std::size_t every, const Globals& g) {
  const ExperimentConfig cfg = load(config, g);
  const Vec curve = bound_curve(parse_theorem(theorem), bound_inputs(cfg), cfg.T);
  std::printf("t,bound\n");
  for (std::size_t t = 1; t <= curve.size(); ++t)
    if (t % every == 0 || t == curve.size())
      std::printf("%zu,%s\n", t, format_double(curve[t - 1]).c_str());
  return 0;
}

int cmd_robust(const std::string& config, std::vector<double> eps, const Globals& g) {
  const ExperimentConfig cfg = load(config, g);
  if (eps.empty()) eps = cfg.robust_eps;
  const auto results = robustness_study(cfg, eps);
  const fs::path dir = cfg.output.dir;
  std::printf("%-16s %12s %14s %10s\n", "agent", "eps", "mean R_T", "ratio");
  for (const RobustnessResult& r : results) {
    write_csv(dir / ("robust_eps_" + format_double(r.epsilon) + ".csv"), r.records);
    for (const RegretCurve& c : regret_curves(r.records)) {
      const double base = mean_final_regret(results.front().records, c.agent);
      std::printf("%-16s %12s %14.4f %10.4f\n", c.agent.c_str(), format_double(r.epsilon).c_str(),
                  c.mean.back(), base > 0.0 ? c.mean.back() / base : 0.0);
    }
  }
  return 0;
}

int cmd_bench(const std::string& config, const Globals& g) {
  const ExperimentConfig cfg = load(config, g);
  std::printf("isa %s\n", std::string(simd::isa_name(simd::active_isa())).c_str());
  std::fputs(format_bench(bench(cfg)).c_str(), stdout);
  return 0;
}

int cmd_plot(const std::string& csv, const std::string& svg, const std::vector<int>& bounds,
             const std::string& config, const Globals& g) {
  const auto records = read_csv(fs::path(csv));
  if (records.empty()) throw IoError(csv + ": no records");
  std::vector<BoundOverlay> extra;
  if (!bounds.empty()) {
    if (config.empty()) throw ConfigError("plot: --bound needs --config for the bound parameters");
    ExperimentConfig cfg = load(config, g);
    cfg.T = records.front().steps.size();
    cfg.output.bound_overlays = bounds;
    extra = overlays(cfg);
  }
  write_svg(fs::path(svg), regret_curves(records), extra);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranking bandits with position and item dependencies"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 1;
  auto* seed_opt = app.add_option("--seed", seed, "Override run_seed_base");
  auto* dir_opt = app.add_option("--out-dir", out_dir, "Override the output directory");
  auto* threads_opt = app.add_option("--threads", threads, "Concurrent runs (0 = auto)");

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "Run the configured experiment; write CSV and SVG");
  simulate->add_option("config", config, "Experiment config (JSON)")->required();

  std::size_t run = 0;
  bool dump_env = false;
  auto* oracle = app.add_subcommand("oracle", "Print the best list of one run's environment");
  oracle->add_option("config", config, "Experiment config (JSON)")->required();
  oracle->add_option("--run", run, "Run index");
  oracle->add_flag("--dump-env", dump_env, "Also print the environment");

  int theorem = 1;
  std::size_t every = 1;
  auto* bound = app.add_subcommand("bound", "Print a regret bound curve as CSV");
  bound->add_option("theorem", theorem, "1 rank_ucb, 2 gen_rank_ucb, 3 rank_ts, 4 win_rank_ucb")
      ->required()
      ->check(CLI::Range(1, 4));
  bound->add_option("config", config, "Experiment config (JSON)")->required();
  bound->add_option("--every", every, "Print every n-th step")->check(CLI::PositiveNumber);

  std::vector<double> eps;
  auto* robust = app.add_subcommand("robust", "Contamination sweep with paired seeds");
  robust->add_option("config", config, "Experiment config (JSON)")->required();
  robust->add_option("--eps", eps, "Contamination amplitudes");

  auto* benchc = app.add_subcommand("bench", "Mean response time per agent and K");
  benchc->add_option("config", config, "Experiment config (JSON)")->required();

  std::string csv;
  std::string svg;
  std::vector<int> plot_bounds;
  auto* plot = app.add_subcommand("plot", "Render a CSV run log as SVG");
  plot->add_option("csv", csv, "Run log")->required();
  plot->add_option("-o,--output", svg, "SVG path")->required();
  plot->add_option("--bound", plot_bounds, "Theorem ids to overlay")->check(CLI::Range(1, 4));
  plot->add_option("--config", config, "Config supplying the bound parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (*seed_opt) g.seed = seed;
  if (*dir_opt) g.out_dir = out_dir;
  if (*threads_opt) g.threads = threads;

  try {
    if (*simulate) return cmd_simulate(config, g);
    if (*oracle) return cmd_oracle(config, run, dump_env, g);
    if (*bound) return cmd_bound(theorem, config, every, g);
    if (*robust) return cmd_robust(config, eps, g);
    if (*benchc) return cmd_bench(config, g);
    if (*plot) return cmd_plot(csv, svg, plot_bounds, config, g);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

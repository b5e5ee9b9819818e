#pragma once

// Seeded multi-run simulations with pseudo-regret accounting, the
// contamination sweep and the response-time table.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankbandit/agents.hpp"
#include "rankbandit/model.hpp"

namespace rankbandit {

struct GeneratorParams {
  std::size_t d = 10;
  std::size_t K = 10;
  std::size_t L = 4;
  double w_max = 0.0;
  std::uint64_t env_seed = 1;
  bool fixed_env = false;  // reuse the env_seed instance for every run
  LinkKind link = LinkKind::identity;
};

struct OutputSpec {
  std::string dir = ".";
  std::string csv = "regret.csv";
  std::string svg = "regret.svg";
  std::vector<int> bound_overlays;  // theorem ids drawn on the plot
};

struct BenchSpec {
  std::vector<std::size_t> K = {10, 100};
  std::size_t T = 200;
  std::size_t runs = 1;
};

struct ExperimentConfig {
  std::optional<EnvironmentSpec> env;  // explicit instance; otherwise generated
  GeneratorParams generator;
  NoiseSpec noise;                     // applied to generated instances
  std::vector<AgentConfig> agents;
  std::size_t T = 10000;
  std::size_t runs = 20;
  std::uint64_t run_seed_base = 1;
  unsigned threads = 1;                // 0 = hardware concurrency
  bool record_timing = false;          // otherwise elapsed_ns is written as 0
  std::vector<double> robust_eps = {0.0, 1e-5, 3.0};
  BenchSpec bench;
  OutputSpec output;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// The environment of run `run`: the explicit one, or a generated instance
// seeded with env_seed + run (env_seed alone when fixed_env is set).
EnvironmentSpec environment_for_run(const ExperimentConfig& cfg, std::size_t run);

// Agent settings that take their bounds from the environment.
AgentConfig default_agent(AgentKind kind, const EnvironmentSpec& env);

struct StepRecord {
  RankedList action;
  double reward_total = 0.0;  // realized, noisy
  double regret_inst = 0.0;   // oracle total minus expected total of `action`
  double regret_cum = 0.0;
  std::int64_t elapsed_ns = 0;
};

struct RunRecord {
  std::string agent;
  std::size_t run = 0;
  double oracle_total = 0.0;
  std::vector<StepRecord> steps;
};

// One record per (agent, run), ordered by agent then run whatever the thread
// count. Run r uses seed run_seed_base + r for the noise and the agent.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

// A single (agent, run) simulation.
RunRecord simulate_run(const ExperimentConfig& cfg, const AgentConfig& agent, std::size_t run);

std::string agent_label(const AgentConfig& agent);

struct RegretCurve {
  std::string agent;
  Vec mean;  // cumulative regret averaged over runs, per step
  Vec min;
  Vec max;
};

// Cumulative-regret curves per agent in order of first appearance.
std::vector<RegretCurve> regret_curves(const std::vector<RunRecord>& records);

// Mean instantaneous regret over steps [begin, end) of every run of `agent`.
double mean_instant_regret(const std::vector<RunRecord>& records, const std::string& agent,
                           std::size_t begin, std::size_t end);

// Mean final cumulative regret of `agent`.
double mean_final_regret(const std::vector<RunRecord>& records, const std::string& agent);

struct RobustnessResult {
  double epsilon = 0.0;
  std::vector<RunRecord> records;
};

// run_experiment at each contamination amplitude with otherwise identical
// seeds, so the Gaussian draws are shared across amplitudes.
std::vector<RobustnessResult> robustness_study(const ExperimentConfig& cfg,
                                               const std::vector<double>& eps);

struct BenchRow {
  std::string agent;
  std::size_t K = 0;
  double mean_ms = 0.0;  // mean wall time of select + observe
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<std::string> warnings;
};

BenchReport bench(const ExperimentConfig& cfg);

// Rows as "agent  K  ART(ms)", one line per (agent, K).
std::string format_bench(const BenchReport& report);

}  // namespace rankbandit

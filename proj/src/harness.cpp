#include "rankbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rankbandit/errors.hpp"

namespace rankbandit {

void ExperimentConfig::validate() const {
  if (T < 1) throw ConfigError("T: must be at least 1");
  if (runs < 1) throw ConfigError("runs: must be at least 1");
  if (agents.empty()) throw ConfigError("agents: at least one agent is required");
  try {
    noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }
  for (double e : robust_eps)
    if (!(e >= 0.0)) throw ConfigError("robust.eps: amplitudes must be nonnegative");
  if (bench.T < 1 || bench.runs < 1) throw ConfigError("bench: T and runs must be at least 1");
  if (env) {
    try {
      env->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    if (generator.d < 2) throw ConfigError("generator.d: must be at least 2");
    if (generator.K < 1) throw ConfigError("generator.K: must be at least 1");
    if (generator.L < 1) throw ConfigError("generator.L: must be at least 1");
    if (!(generator.w_max >= 0.0)) throw ConfigError("generator.w_max: must be nonnegative");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    try {
      agents[i].validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("agents[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

EnvironmentSpec environment_for_run(const ExperimentConfig& cfg, std::size_t run) {
  if (cfg.env) return *cfg.env;
  const GeneratorParams& g = cfg.generator;
  EnvironmentSpec env = generate_environment(g.d, g.K, g.L, g.w_max,
                                             g.fixed_env ? g.env_seed : g.env_seed + run);
  env.noise = cfg.noise;
  if (g.link != LinkKind::identity) {
    env.links.assign(env.L, LinkFunction{g.link});
    const DerivativeBounds db = derivative_bounds(env.links, feature_radius(env));
    env.bounds.c1 = db.c1;
    env.bounds.c2 = db.c2;
  }
  return env;
}

AgentConfig default_agent(AgentKind kind, const EnvironmentSpec& env) {
  AgentConfig a;
  a.kind = kind;
  a.bounds = env.bounds;
  if (kind == AgentKind::win_rank_ucb) a.window = WindowSpec{};
  return a;
}

std::string agent_label(const AgentConfig& agent) {
  return agent.label.empty() ? std::string(agent_name(agent.kind)) : agent.label;
}

RunRecord simulate_run(const ExperimentConfig& cfg, const AgentConfig& agent_cfg, std::size_t run) {
  using Clock = std::chrono::steady_clock;
  const std::uint64_t seed = cfg.run_seed_base + run;
  const EnvironmentSpec env = environment_for_run(cfg, run);
  const OracleResult oracle = oracle_best(env);

  RunRecord rec;
  rec.agent = agent_label(agent_cfg);
  rec.run = run;
  rec.oracle_total = oracle.total;
  rec.steps.reserve(cfg.T);

  auto agent = make_agent(agent_cfg, seed);
  agent->initialize(env);
  NoiseStreams streams(seed);
  double cum = 0.0;
  for (std::size_t t = 0; t < cfg.T; ++t) {
    StepRecord s;
    const auto start = cfg.record_timing ? Clock::now() : Clock::time_point{};
    s.action = agent->select();
    const StepOutcome outcome = sample_reward(s.action, env, streams);
    agent->observe(s.action, outcome);
    if (cfg.record_timing)
      s.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    double expected = 0.0;
    for (double r : outcome.expected) expected += r;
    for (double r : outcome.rewards) s.reward_total += r;
    s.regret_inst = oracle.total - expected;
    cum += s.regret_inst;
    s.regret_cum = cum;
    rec.steps.push_back(std::move(s));
  }
  return rec;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t jobs = cfg.agents.size() * cfg.runs;
  std::vector<RunRecord> out(jobs);
  unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, jobs));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        out[job] = simulate_run(cfg, cfg.agents[job / cfg.runs], job % cfg.runs);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<RegretCurve> regret_curves(const std::vector<RunRecord>& records) {
  std::vector<RegretCurve> curves;
  std::vector<std::size_t> counts;
  for (const RunRecord& r : records) {
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const RegretCurve& c) { return c.agent == r.agent; });
    if (it == curves.end()) {
      RegretCurve c;
      c.agent = r.agent;
      c.mean.assign(r.steps.size(), 0.0);
      c.min.assign(r.steps.size(), std::numeric_limits<double>::infinity());
      c.max.assign(r.steps.size(), -std::numeric_limits<double>::infinity());
      curves.push_back(std::move(c));
      counts.push_back(0);
      it = curves.end() - 1;
    }
    if (it->mean.size() != r.steps.size())
      throw std::invalid_argument("regret_curves: runs of " + r.agent + " differ in length");
    ++counts[static_cast<std::size_t>(it - curves.begin())];
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
      const double v = r.steps[t].regret_cum;
      it->mean[t] += v;
      it->min[t] = std::min(it->min[t], v);
      it->max[t] = std::max(it->max[t], v);
    }
  }
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (double& v : curves[i].mean) v /= static_cast<double>(counts[i]);
  return curves;
}

double mean_instant_regret(const std::vector<RunRecord>& records, const std::string& agent,
                           std::size_t begin, std::size_t end) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const RunRecord& r : records) {
    if (r.agent != agent) continue;
    for (std::size_t t = begin; t < std::min(end, r.steps.size()); ++t, ++n) sum += r.steps[t].regret_inst;
  }
  if (n == 0) throw std::invalid_argument("mean_instant_regret: no steps for " + agent);
  return sum / static_cast<double>(n);
}

double mean_final_regret(const std::vector<RunRecord>& records, const std::string& agent) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const RunRecord& r : records)
    if (r.agent == agent && !r.steps.empty()) {
      sum += r.steps.back().regret_cum;
      ++n;
    }
  if (n == 0) throw std::invalid_argument("mean_final_regret: no runs for " + agent);
  return sum / static_cast<double>(n);
}

std::vector<RobustnessResult> robustness_study(const ExperimentConfig& cfg,
                                               const std::vector<double>& eps) {
  std::vector<RobustnessResult> out;
  for (double e : eps) {
    if (!(e >= 0.0)) throw std::invalid_argument("robustness_study: eps must be nonnegative");
    ExperimentConfig c = cfg;
    c.noise.laplace_scale = e;
    if (c.env) c.env->noise.laplace_scale = e;
    out.push_back({e, run_experiment(c)});
  }
  return out;
}

BenchReport bench(const ExperimentConfig& cfg) {
  BenchReport report;
  std::vector<std::size_t> Ks = cfg.env ? std::vector<std::size_t>{cfg.env->K} : cfg.bench.K;
  for (const AgentConfig& a : cfg.agents) {
    for (std::size_t K : Ks) {
      ExperimentConfig c = cfg;
      c.agents = {a};
      c.generator.K = K;
      c.T = cfg.bench.T;
      c.runs = cfg.bench.runs;
      c.record_timing = true;
      c.threads = 1;
      double total_ns = 0.0;
      std::size_t steps = 0;
      for (const RunRecord& r : run_experiment(c))
        for (const StepRecord& s : r.steps) {
          total_ns += static_cast<double>(s.elapsed_ns);
          ++steps;
        }
      report.rows.push_back({agent_label(a), K, total_ns / static_cast<double>(steps) / 1e6});
    }
  }
  // larger K should cost more; a violation is reported, never fatal
  for (std::size_t i = 0; i < report.rows.size(); ++i)
    for (std::size_t j = 0; j < report.rows.size(); ++j) {
      const BenchRow& a = report.rows[i];
      const BenchRow& b = report.rows[j];
      if (a.agent == b.agent && a.K < b.K && !(b.mean_ms > a.mean_ms)) {
        std::ostringstream os;
        os << "warning: " << a.agent << " took no longer at K=" << b.K << " than at K=" << a.K;
        report.warnings.push_back(os.str());
      }
    }
  return report;
}

std::string format_bench(const BenchReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %6s %12s\n", "agent", "K", "ART(ms)");
  os << line;
  for (const BenchRow& r : report.rows) {
    std::snprintf(line, sizeof line, "%-16s %6zu %12.4f\n", r.agent.c_str(), r.K, r.mean_ms);
    os << line;
  }
  for (const std::string& w : report.warnings) os << w << '\n';
  return os.str();
}

}  // namespace rankbandit

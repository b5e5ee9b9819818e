#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rankbandit/bounds.hpp"
#include "rankbandit/config.hpp"
#include "rankbandit/errors.hpp"
#include "rankbandit/export.hpp"
#include "rankbandit/harness.hpp"

using namespace rankbandit;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(std::vector<AgentKind> kinds, std::size_t T = 80, std::size_t runs = 3) {
  ExperimentConfig cfg;
  cfg.generator.d = 3;
  cfg.generator.K = 4;
  cfg.generator.L = 3;
  cfg.generator.w_max = 1.0;
  cfg.generator.env_seed = 5;
  cfg.T = T;
  cfg.runs = runs;
  const EnvironmentSpec env = environment_for_run(cfg, 0);
  for (AgentKind k : kinds) cfg.agents.push_back(default_agent(k, env));
  return cfg;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Simulation, OracleAgentHasZeroRegret) {
  const auto records = run_experiment(small_config({AgentKind::oracle}));
  for (const RunRecord& r : records)
    for (const StepRecord& s : r.steps) EXPECT_EQ(s.regret_inst, 0.0);
}

TEST(Simulation, RegretAccounting) {
  const auto cfg = small_config({AgentKind::rank_ucb, AgentKind::baseline});
  const auto records = run_experiment(cfg);
  ASSERT_EQ(records.size(), 6u);
  for (const RunRecord& r : records) {
    const EnvironmentSpec env = environment_for_run(cfg, r.run);
    double cum = 0.0;
    for (const StepRecord& s : r.steps) {
      EXPECT_NEAR(s.regret_inst, r.oracle_total - expected_reward(s.action, env).total, 1e-9);
      EXPECT_GE(s.regret_inst, -1e-9);
      cum += s.regret_inst;
      EXPECT_EQ(s.regret_cum, cum);
      EXPECT_EQ(s.elapsed_ns, 0);
    }
  }
  EXPECT_EQ(records[0].agent, "rank_ucb");
  EXPECT_EQ(records[5].agent, "baseline");
  EXPECT_EQ(records[5].run, 2u);
}

TEST(Simulation, MeanCurveAveragesRuns) {
  const auto records = run_experiment(small_config({AgentKind::rank_ts}));
  const auto curves = regret_curves(records);
  ASSERT_EQ(curves.size(), 1u);
  for (std::size_t t = 0; t < curves[0].mean.size(); ++t) {
    double s = 0.0;
    for (const RunRecord& r : records) s += r.steps[t].regret_cum;
    EXPECT_NEAR(curves[0].mean[t], s / 3.0, 1e-12);
    EXPECT_LE(curves[0].min[t], curves[0].mean[t]);
    EXPECT_GE(curves[0].max[t], curves[0].mean[t]);
  }
  EXPECT_NEAR(mean_final_regret(records, "rank_ts"), curves[0].mean.back(), 1e-12);
  EXPECT_THROW(mean_final_regret(records, "nobody"), std::invalid_argument);
}

TEST(Simulation, ThreadCountDoesNotChangeResults) {
  auto cfg = small_config({AgentKind::rank_ucb, AgentKind::rank_ts, AgentKind::gen_rank_ucb});
  const auto serial = run_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = run_experiment(cfg);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    ASSERT_EQ(serial[i].agent, parallel[i].agent);
    for (std::size_t t = 0; t < serial[i].steps.size(); ++t) {
      EXPECT_EQ(serial[i].steps[t].action, parallel[i].steps[t].action);
      EXPECT_EQ(serial[i].steps[t].reward_total, parallel[i].steps[t].reward_total);
    }
  }
}

TEST(Robustness, ZeroAmplitudeMatchesPlainRun) {
  const auto cfg = small_config({AgentKind::rank_ucb});
  const auto plain = run_experiment(cfg);
  const auto study = robustness_study(cfg, {0.0, 0.5});
  ASSERT_EQ(study.size(), 2u);
  for (std::size_t i = 0; i < plain.size(); ++i)
    for (std::size_t t = 0; t < plain[i].steps.size(); ++t)
      EXPECT_EQ(plain[i].steps[t].reward_total, study[0].records[i].steps[t].reward_total);
  EXPECT_NE(plain[0].steps[0].reward_total, study[1].records[0].steps[0].reward_total);
}

TEST(Bench, OneRowPerAgentAndK) {
  auto cfg = small_config({AgentKind::rank_ucb, AgentKind::oracle});
  cfg.bench.K = {3, 6};
  cfg.bench.T = 5;
  const BenchReport report = bench(cfg);
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.rows[1].agent, "rank_ucb");
  EXPECT_EQ(report.rows[1].K, 6u);
  for (const BenchRow& r : report.rows) EXPECT_GT(r.mean_ms, 0.0);
  const std::string table = format_bench(report);
  EXPECT_EQ(table.rfind("agent", 0), 0u);
}

TEST(Export, CsvRoundTrip) {
  const auto records = run_experiment(small_config({AgentKind::rank_ucb, AgentKind::rank_ts}, 20, 2));
  std::stringstream ss;
  write_csv(ss, records);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 1u + 4u * 20u);
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].agent, records[i].agent);
    EXPECT_EQ(back[i].run, records[i].run);
    for (std::size_t t = 0; t < 20; ++t) {
      EXPECT_EQ(back[i].steps[t].action, records[i].steps[t].action);
      EXPECT_EQ(back[i].steps[t].regret_cum, records[i].steps[t].regret_cum);
      EXPECT_EQ(back[i].steps[t].reward_total, records[i].steps[t].reward_total);
    }
  }
}

TEST(Export, MalformedCsvIsRejected) {
  std::stringstream ss(std::string(kCsvHeader) + "\nrank_ucb,0,2,0-1,1,0,0,0\n");
  EXPECT_THROW(read_csv(ss), IoError);
}

TEST(Export, SvgHasOnePolylinePerCurve) {
  const auto records = run_experiment(small_config({AgentKind::rank_ucb, AgentKind::baseline}, 30, 2));
  const std::string svg = render_svg(regret_curves(records), {{"bound 1", Vec(30, 5.0)}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "<polyline"), 3u);
  EXPECT_EQ(count(svg, "data-name=\"rank_ucb\""), 1u);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 1u);
}

TEST(Export, UnwritablePathRaisesIoError) {
  const fs::path blocker = fs::temp_directory_path() / "rankbandit_blocker_file";
  write_text_file(blocker, "x");
  EXPECT_THROW(write_text_file(blocker / "child.csv", "y"), IoError);
  fs::remove(blocker);
}

TEST(Config, ParsesAgentsAndDefaults) {
  const auto cfg = parse_experiment(R"({
    "generator": {"d": 3, "K": 5, "L": 2, "w_max": 2},
    "agents": ["rank_ucb", {"kind": "win_rank_ucb", "label": "win3", "window": {"S": 2}}],
    "T": 7})");
  EXPECT_EQ(cfg.T, 7u);
  EXPECT_EQ(cfg.runs, 20u);
  ASSERT_EQ(cfg.agents.size(), 2u);
  EXPECT_EQ(agent_label(cfg.agents[1]), "win3");
  EXPECT_EQ(cfg.agents[0].bounds.m3, 2.0);
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      parse_experiment(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message(R"({"agents": ["rank_ucb"], "generator": {"w_maxx": 1}})"),
            "generator.w_maxx: unknown key");
  EXPECT_NE(message(R"({"agents": []})").find("agents"), std::string::npos);
  EXPECT_NE(message(R"({"agents": ["nope"]})").find("agents[0]"), std::string::npos);
  EXPECT_NE(message(R"({"agents": ["rank_ucb"], "T": -1})").find("T"), std::string::npos);
  EXPECT_NE(message("{not json"), "no error");
  EXPECT_THROW(load_experiment("/nonexistent/cfg.json"), IoError);
}

TEST(Bounds, ScalarOracleValue) {
  BoundInputs in;
  in.bounds.m1 = 1.0;
  in.bounds.m2 = 1.0;
  in.bounds.lambda = 1.0;
  in.bounds.delta = 0.1;
  in.d = 1;
  in.L = 1;
  in.w = {0.0};
  EXPECT_NEAR(bound_value(BoundTheorem::rank_ucb, in, 100), 245.26791402486356, 1e-9);
}

TEST(Bounds, CurvesAreNondecreasingAndLinearInL) {
  BoundInputs in;
  in.d = 4;
  in.L = 3;
  in.w = {0.0, 0.5, -1.0};
  in.bounds.m3 = 1.0;
  for (int id = 1; id <= 4; ++id) {
    const Vec c = bound_curve(parse_theorem(id), in, 500);
    ASSERT_EQ(c.size(), 500u);
    for (std::size_t t = 1; t < c.size(); ++t) EXPECT_GE(c[t], c[t - 1]) << id;
    BoundInputs twice = in;
    twice.L = 6;
    twice.w = {0.0, 0.5, -1.0, 0.0, 0.5, -1.0};
    EXPECT_NEAR(bound_value(parse_theorem(id), twice, 300), 2.0 * bound_value(parse_theorem(id), in, 300),
                1e-9 * c.back());
  }
  EXPECT_THROW(parse_theorem(5), std::invalid_argument);
}

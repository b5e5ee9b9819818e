#pragma once

// Decision policies over ranked lists.
//
//   rank_ucb      optimistic per-position values on the pairwise graph, w known
//   gen_rank_ucb  jointly estimates (theta_l, w_l theta_l) on stacked 2d features
//   rank_ts       posterior sampling on the pairwise graph, w known
//   win_rank_ucb  optimistic values on the window-S graph, window weights known
//   baseline      L independent linear UCBs, greedy per position, no repeats
//   oracle        always plays the true best list

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rankbandit/confidence.hpp"
#include "rankbandit/graph.hpp"
#include "rankbandit/model.hpp"

namespace rankbandit {

enum class AgentKind { rank_ucb, gen_rank_ucb, rank_ts, win_rank_ucb, baseline, oracle };

std::string_view agent_name(AgentKind kind);
AgentKind parse_agent(std::string_view name);

// Whether the policy is handed the dependency weights.
constexpr bool knows_w(AgentKind kind) {
  return kind == AgentKind::rank_ucb || kind == AgentKind::rank_ts ||
         kind == AgentKind::win_rank_ucb || kind == AgentKind::oracle;
}

struct AgentConfig {
  AgentKind kind = AgentKind::rank_ucb;
  // lambda and delta drive the estimators; m2 and m3 enter the radius;
  // c1 inflates the logistic bonus.
  BoundParams bounds;
  // Required for win_rank_ucb, forbidden otherwise. Empty weights mean
  // w_{l,1} = w_l from the environment and zero for longer lags.
  std::optional<WindowSpec> window;
  bool forbid_adjacent_repeat = false;
  std::string label;  // name in outputs; defaults to the kind's name

  void validate() const;
};

struct OracleResult {
  RankedList list;
  double total = 0.0;        // expected reward of `list`
  double path_weight = 0.0;  // longest-path weight on the true graph
};

// Best list under the true parameters: longest path over the pairwise graph
// weighted with the true per-position expected rewards.
OracleResult oracle_best(const EnvironmentSpec& env, bool forbid_adjacent_repeat = false);

class Agent {
 public:
  virtual ~Agent() = default;

  // Hands over the public environment data: arm vectors, v0, L, the links
  // and, for agents that know them, the dependency weights.
  virtual void initialize(const EnvironmentSpec& env) = 0;

  virtual RankedList select() = 0;

  // Outcome of playing `a`; rewards must hold L entries.
  virtual void observe(const RankedList& a, const StepOutcome& outcome) = 0;

  // Sum of the current optimistic position values along `a`. UCB agents only.
  virtual double optimistic_total(const RankedList& a) const;

  virtual const PositionEstimator* estimator(std::size_t /*position*/) const { return nullptr; }
  virtual GaussianPosterior* posterior(std::size_t /*position*/) { return nullptr; }

  const AgentConfig& config() const { return config_; }
  AgentKind kind() const { return config_.kind; }
  std::size_t step() const { return step_; }
  bool initialized() const { return initialized_; }

 protected:
  explicit Agent(AgentConfig config) : config_(std::move(config)) {}
  void require_initialized(const char* what) const;
  void check_outcome(const RankedList& a, const StepOutcome& outcome) const;

  AgentConfig config_;
  std::size_t K_ = 0;
  std::size_t L_ = 0;
  std::size_t step_ = 0;
  bool initialized_ = false;
};

// `seed` feeds the agent's own random stream (posterior sampling).
std::unique_ptr<Agent> make_agent(const AgentConfig& config, std::uint64_t seed);

}  // namespace rankbandit

#include "rankbandit/agents.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "rankbandit/errors.hpp"

namespace rankbandit {
namespace {

struct Term {
  std::size_t index;  // basis row
  double coef;
};

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Each vertex of every layer as a fixed-length linear combination of basis
// rows. Layer l holds K^min(l+1, S) vertices in the graph's base-K encoding.
class ComboTable {
 public:
  ComboTable() = default;

  // cur item j -> row j; the item i lags back -> row prev_offset + i, with
  // row prev_offset + K standing for v0.
  template <class Coef>
  ComboTable(std::size_t K, std::size_t L, std::size_t S, std::size_t prev_offset, Coef coef)
      : stride_(S), layers_(L) {
    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t len = std::min(l + 1, S);
      const std::size_t n = ipow(K, len);
      auto& terms = layers_[l];
      terms.reserve(n * S);
      std::vector<std::size_t> tuple(len);
      for (std::size_t v = 0; v < n; ++v) {
        std::size_t rest = v;
        for (std::size_t i = len; i-- > 0;) {
          tuple[i] = rest % K;
          rest /= K;
        }
        terms.push_back({tuple[len - 1], 1.0});
        for (std::size_t lag = 1; lag < S; ++lag) {
          const std::size_t item = lag < len ? tuple[len - 1 - lag] : K;
          terms.push_back({prev_offset + item, coef(l, lag)});
        }
      }
    }
  }

  std::size_t vertices(std::size_t l) const { return layers_[l].size() / stride_; }
  std::span<const Term> at(std::size_t l, std::size_t v) const {
    return {layers_[l].data() + v * stride_, stride_};
  }

 private:
  std::size_t stride_ = 1;
  std::vector<std::vector<Term>> layers_;
};

// Vertex index of list `a` on layer l of a window-S graph.
std::size_t vertex_of(const RankedList& a, std::size_t l, std::size_t K, std::size_t S) {
  const std::size_t len = std::min(l + 1, S);
  std::size_t v = 0;
  for (std::size_t i = l + 1 - len; i <= l; ++i) v = v * K + a[i];
  return v;
}

std::size_t argmax_first(const Vec& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

EstimatorOptions estimator_options(const BoundParams& b, double m2_bound, LinkFunction link) {
  EstimatorOptions o;
  o.lambda = b.lambda;
  o.delta = b.delta;
  o.m2_bound = m2_bound;
  o.c1 = b.c1;
  o.link = link;
  return o;
}

// Shared machinery of the graph-based policies: a fixed basis, per-vertex
// combinations of it, node values per layer, and the longest path.
class GraphAgent : public Agent {
 public:
  using Agent::Agent;

  void initialize(const EnvironmentSpec& env) override {
    env.validate();
    K_ = env.K;
    L_ = env.L;
    arms_ = env.arms;
    links_ = env.links;
    setup(env);
    if (L_ >= 2) {
      graph_.emplace(LayeredGraph::build_window(K_, L_, S_, config_.forbid_adjacent_repeat));
    } else if (config_.forbid_adjacent_repeat && K_ < 2) {
      throw std::invalid_argument("forbid_adjacent_repeat needs K >= 2");
    }
    values_.assign(L_, Vec{});
    for (std::size_t l = 0; l < L_; ++l) values_[l].resize(combos_.vertices(l));
    step_ = 0;
    initialized_ = true;
  }

  RankedList select() override {
    require_initialized("select");
    fill_values();
    if (L_ == 1) return RankedList{{argmax_first(values_[0])}};
    graph_->assign_weights(values_);
    return longest_path(*graph_).items;
  }

 protected:
  virtual void setup(const EnvironmentSpec& env) = 0;
  virtual void fill_values() = 0;

  // values_[l][v] = sum of coef * dots over the vertex's terms
  void linear_values(std::size_t l, const Vec& dots, Vec& out) const {
    for (std::size_t v = 0; v < out.size(); ++v) {
      double s = 0.0;
      for (const Term& t : combos_.at(l, v)) s += t.coef * dots[t.index];
      out[v] = s;
    }
  }

  std::size_t S_ = 2;
  ArmSet arms_;
  std::vector<LinkFunction> links_;
  Matrix basis_;
  ComboTable combos_;
  std::optional<LayeredGraph> graph_;
  std::vector<Vec> values_;
};

class UcbGraphAgent final : public GraphAgent {
 public:
  explicit UcbGraphAgent(AgentConfig config) : GraphAgent(std::move(config)) {}

  void observe(const RankedList& a, const StepOutcome& outcome) override {
    require_initialized("observe");
    check_outcome(a, outcome);
    for (std::size_t l = 0; l < L_; ++l) estimators_[l].observe(observed_feature(a, l), outcome.rewards[l]);
    ++step_;
  }

  double optimistic_total(const RankedList& a) const override {
    require_initialized("optimistic_total");
    check_list(a, K_, L_);
    std::vector<Vec> values(L_);
    double total = 0.0;
    for (std::size_t l = 0; l < L_; ++l) {
      values[l].resize(combos_.vertices(l));
      ucb_values(l, values[l]);
      total += values[l][vertex_of(a, l, K_, S_)];
    }
    return total;
  }

  const PositionEstimator* estimator(std::size_t position) const override {
    return position < estimators_.size() ? &estimators_[position] : nullptr;
  }

 private:
  bool stacked() const { return config_.kind == AgentKind::gen_rank_ucb; }

  void setup(const EnvironmentSpec& env) override {
    const std::size_t d = env.d;
    const BoundParams& b = config_.bounds;
    estimators_.clear();
    if (stacked()) {
      // rows: (v_j, 0) for arms, then (0, v_m) for arms and v0
      S_ = 2;
      basis_ = Matrix(2 * K_ + 1, 2 * d);
      for (std::size_t j = 0; j < K_; ++j)
        for (std::size_t k = 0; k < d; ++k) basis_(j, k) = arms_.vectors[j][k];
      for (std::size_t m = 0; m <= K_; ++m)
        for (std::size_t k = 0; k < d; ++k) basis_(K_ + m, d + k) = arms_.at(m)[k];
      combos_ = ComboTable(K_, L_, 2, K_, [](std::size_t, std::size_t) { return 1.0; });
      const double m2 = b.m2 * std::sqrt(1.0 + b.m3 * b.m3);
      for (std::size_t l = 0; l < L_; ++l)
        estimators_.emplace_back(2 * d, estimator_options(b, m2, links_[l]));
      return;
    }
    window_ = config_.window.value_or(WindowSpec{});
    if (window_.weights.empty()) {
      for (std::size_t l = 0; l < L_; ++l) {
        Vec row(window_.S - 1, 0.0);
        row[0] = env.w[l];
        window_.weights.push_back(std::move(row));
      }
    }
    if (config_.kind == AgentKind::win_rank_ucb) window_.validate(L_);
    S_ = window_.S;
    basis_ = Matrix(K_ + 1, d);
    for (std::size_t m = 0; m <= K_; ++m)
      for (std::size_t k = 0; k < d; ++k) basis_(m, k) = arms_.at(m)[k];
    const auto& w = window_.weights;
    combos_ = ComboTable(K_, L_, S_, 0, [&](std::size_t l, std::size_t lag) { return w[l][lag - 1]; });
    for (std::size_t l = 0; l < L_; ++l)
      estimators_.emplace_back(d, estimator_options(b, b.m2, links_[l]));
  }

  Vec observed_feature(const RankedList& a, std::size_t l) const {
    if (!stacked()) return window_feature(a, l, arms_, window_);
    const Vec& cur = arms_.vectors[a[l]];
    const Vec& prev = l == 0 ? arms_.v0 : arms_.vectors[a[l - 1]];
    Vec x(cur);
    x.insert(x.end(), prev.begin(), prev.end());
    return x;
  }

  void ucb_values(std::size_t l, Vec& out) const {
    const PositionEstimator& est = estimators_[l];
    project_basis(basis_, est.theta_hat(), &est.V().inverse(), proj_);
    const double radius = est.beta_radius();
    for (std::size_t v = 0; v < out.size(); ++v) {
      const auto terms = combos_.at(l, v);
      double lin = 0.0;
      double quad = 0.0;
      for (const Term& p : terms) {
        lin += p.coef * proj_.dots[p.index];
        for (const Term& q : terms) quad += p.coef * q.coef * proj_.gram(p.index, q.index);
      }
      out[v] = est.ucb_from_parts(lin, std::sqrt(std::max(0.0, quad)), radius);
    }
  }

  void fill_values() override {
    for (std::size_t l = 0; l < L_; ++l) ucb_values(l, values_[l]);
  }

  WindowSpec window_;
  std::vector<PositionEstimator> estimators_;
  mutable BasisProjection proj_;
};

class RankTsAgent final : public GraphAgent {
 public:
  RankTsAgent(AgentConfig config, std::uint64_t seed) : GraphAgent(std::move(config)) {
    std::seed_seq s{seed, std::uint64_t{0x7473ULL}};
    rng_.seed(s);
  }

  void observe(const RankedList& a, const StepOutcome& outcome) override {
    require_initialized("observe");
    check_outcome(a, outcome);
    for (std::size_t l = 0; l < L_; ++l)
      posteriors_[l].observe(feature(a, l, arms_, w_), outcome.rewards[l]);
    ++step_;
  }

  GaussianPosterior* posterior(std::size_t position) override {
    return position < posteriors_.size() ? &posteriors_[position] : nullptr;
  }

 private:
  void setup(const EnvironmentSpec& env) override {
    S_ = 2;
    w_ = env.w;
    basis_ = Matrix(K_ + 1, env.d);
    for (std::size_t m = 0; m <= K_; ++m)
      for (std::size_t k = 0; k < env.d; ++k) basis_(m, k) = arms_.at(m)[k];
    combos_ = ComboTable(K_, L_, 2, 0, [&](std::size_t l, std::size_t) { return w_[l]; });
    posteriors_.assign(L_, GaussianPosterior(env.d, config_.bounds.lambda));
  }

  void fill_values() override {
    for (std::size_t l = 0; l < L_; ++l) {
      const Vec theta = posteriors_[l].sample(rng_);
      project_basis(basis_, theta, nullptr, proj_);
      linear_values(l, proj_.dots, values_[l]);
      if (links_[l].kind != LinkKind::identity)
        for (double& v : values_[l]) v = links_[l].value(v);
    }
  }

  Vec w_;
  std::vector<GaussianPosterior> posteriors_;
  std::mt19937_64 rng_;
  BasisProjection proj_;
};

class BaselineAgent final : public Agent {
 public:
  explicit BaselineAgent(AgentConfig config) : Agent(std::move(config)) {}

  void initialize(const EnvironmentSpec& env) override {
    env.validate();
    if (env.K < env.L)
      throw std::invalid_argument("baseline needs K >= L to fill a list without repeats");
    K_ = env.K;
    L_ = env.L;
    arms_ = env.arms;
    basis_ = Matrix(K_, env.d);
    for (std::size_t j = 0; j < K_; ++j)
      for (std::size_t k = 0; k < env.d; ++k) basis_(j, k) = arms_.vectors[j][k];
    estimators_.clear();
    for (std::size_t l = 0; l < L_; ++l)
      estimators_.emplace_back(env.d, estimator_options(config_.bounds, config_.bounds.m2, env.links[l]));
    step_ = 0;
    initialized_ = true;
  }

  RankedList select() override {
    require_initialized("select");
    RankedList a;
    std::vector<char> used(K_, 0);
    for (std::size_t l = 0; l < L_; ++l) {
      const Vec values = arm_values(l);
      std::size_t best = K_;
      for (std::size_t j = 0; j < K_; ++j)
        if (!used[j] && (best == K_ || values[j] > values[best])) best = j;
      used[best] = 1;
      a.items.push_back(best);
    }
    return a;
  }

  void observe(const RankedList& a, const StepOutcome& outcome) override {
    require_initialized("observe");
    check_outcome(a, outcome);
    for (std::size_t l = 0; l < L_; ++l) estimators_[l].observe(arms_.vectors[a[l]], outcome.rewards[l]);
    ++step_;
  }

  double optimistic_total(const RankedList& a) const override {
    require_initialized("optimistic_total");
    check_list(a, K_, L_);
    double total = 0.0;
    for (std::size_t l = 0; l < L_; ++l) total += arm_values(l)[a[l]];
    return total;
  }

  const PositionEstimator* estimator(std::size_t position) const override {
    return position < estimators_.size() ? &estimators_[position] : nullptr;
  }

 private:
  Vec arm_values(std::size_t l) const {
    const PositionEstimator& est = estimators_[l];
    project_basis(basis_, est.theta_hat(), &est.V().inverse(), proj_);
    const double radius = est.beta_radius();
    Vec out(K_);
    for (std::size_t j = 0; j < K_; ++j)
      out[j] = est.ucb_from_parts(proj_.dots[j], std::sqrt(std::max(0.0, proj_.gram(j, j))), radius);
    return out;
  }

  ArmSet arms_;
  Matrix basis_;
  std::vector<PositionEstimator> estimators_;
  mutable BasisProjection proj_;
};

class OracleAgent final : public Agent {
 public:
  explicit OracleAgent(AgentConfig config) : Agent(std::move(config)) {}

  void initialize(const EnvironmentSpec& env) override {
    best_ = oracle_best(env, config_.forbid_adjacent_repeat).list;
    K_ = env.K;
    L_ = env.L;
    step_ = 0;
    initialized_ = true;
  }

  RankedList select() override {
    require_initialized("select");
    return best_;
  }

  void observe(const RankedList& a, const StepOutcome& outcome) override {
    require_initialized("observe");
    check_outcome(a, outcome);
    ++step_;
  }

 private:
  RankedList best_;
};

}  // namespace

std::string_view agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::rank_ucb: return "rank_ucb";
    case AgentKind::gen_rank_ucb: return "gen_rank_ucb";
    case AgentKind::rank_ts: return "rank_ts";
    case AgentKind::win_rank_ucb: return "win_rank_ucb";
    case AgentKind::baseline: return "baseline";
    case AgentKind::oracle: return "oracle";
  }
  return "?";
}

AgentKind parse_agent(std::string_view name) {
  for (AgentKind k : {AgentKind::rank_ucb, AgentKind::gen_rank_ucb, AgentKind::rank_ts,
                      AgentKind::win_rank_ucb, AgentKind::baseline, AgentKind::oracle})
    if (agent_name(k) == name) return k;
  throw std::invalid_argument("unknown agent kind '" + std::string(name) + "'");
}

void AgentConfig::validate() const {
  bounds.validate();
  if (kind == AgentKind::win_rank_ucb && !window)
    throw std::invalid_argument("win_rank_ucb needs a window");
  if (kind != AgentKind::win_rank_ucb && window)
    throw std::invalid_argument(std::string(agent_name(kind)) + " does not take a window");
  if (window && window->S < 2) throw std::invalid_argument("window: S must be at least 2");
  if (forbid_adjacent_repeat && kind == AgentKind::baseline)
    throw std::invalid_argument("baseline never repeats items; forbid_adjacent_repeat does not apply");
}

double Agent::optimistic_total(const RankedList&) const {
  throw StateError(std::string(agent_name(kind())) + " has no optimistic values");
}

void Agent::require_initialized(const char* what) const {
  if (!initialized_)
    throw StateError(std::string(agent_name(kind())) + ": " + what + " before initialize");
}

void Agent::check_outcome(const RankedList& a, const StepOutcome& outcome) const {
  check_list(a, K_, L_);
  if (outcome.rewards.size() != L_)
    throw std::invalid_argument("observe: outcome has " + std::to_string(outcome.rewards.size()) +
                                " rewards, expected " + std::to_string(L_));
}

OracleResult oracle_best(const EnvironmentSpec& env, bool forbid_adjacent_repeat) {
  env.validate();
  const std::size_t K = env.K;
  auto value = [&](std::size_t l, std::size_t prev, std::size_t j) {
    const Vec& cur = env.arms.vectors[j];
    const Vec& before = env.arms.at(prev);
    const double wl = env.w[l];
    Vec x(cur.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = cur[k] + wl * before[k];
    return env.links[l].value(dot(env.theta[l], x));
  };
  OracleResult r;
  if (env.L == 1) {
    Vec v(K);
    for (std::size_t j = 0; j < K; ++j) v[j] = value(0, K, j);
    r.list.items = {argmax_first(v)};
    r.path_weight = v[r.list[0]];
  } else {
    LayeredGraph g = LayeredGraph::build(K, env.L, forbid_adjacent_repeat);
    g.assign_weights(pairwise_node_values(g, value));
    PathResult p = longest_path(g);
    r.list = std::move(p.items);
    r.path_weight = p.weight;
  }
  r.total = expected_reward(r.list, env).total;
  return r;
}

std::unique_ptr<Agent> make_agent(const AgentConfig& config, std::uint64_t seed) {
  config.validate();
  switch (config.kind) {
    case AgentKind::rank_ucb:
    case AgentKind::gen_rank_ucb:
    case AgentKind::win_rank_ucb:
      return std::make_unique<UcbGraphAgent>(config);
    case AgentKind::rank_ts:
      return std::make_unique<RankTsAgent>(config, seed);
    case AgentKind::baseline:
      return std::make_unique<BaselineAgent>(config);
    case AgentKind::oracle:
      return std::make_unique<OracleAgent>(config);
  }
  throw std::invalid_argument("make_agent: unknown kind");
}

}  // namespace rankbandit

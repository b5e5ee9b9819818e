#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "rankbandit/errors.hpp"
#include "rankbandit/model.hpp"
#include "rankbandit/serialize.hpp"
#include "test_util.hpp"

using namespace rankbandit;

namespace {

EnvironmentSpec tiny_env() {
  EnvironmentSpec env;
  env.d = 2;
  env.K = 2;
  env.L = 2;
  env.theta = {{1.0, 0.0}, {0.0, 1.0}};
  env.w = {0.5, -0.5};
  env.arms.vectors = {{1.0, 0.0}, {0.0, 1.0}};
  env.arms.v0 = {0.5, 0.5};
  env.links.assign(2, LinkFunction{});
  return env;
}

}  // namespace

TEST(Link, IdentityAndLogistic) {
  const LinkFunction id{LinkKind::identity};
  const LinkFunction lg{LinkKind::logistic};
  EXPECT_EQ(id.value(3.5), 3.5);
  EXPECT_EQ(id.derivative(-2.0), 1.0);
  EXPECT_EQ(lg.value(0.0), 0.5);
  EXPECT_NEAR(lg.derivative(0.0), 0.25, 1e-16);
  // sigma'(2) = e^-2 / (1 + e^-2)^2
  EXPECT_NEAR(lg.derivative(2.0), 0.10499358540350662, 1e-15);
  EXPECT_NEAR(lg.value(-800.0), 0.0, 1e-300);
  EXPECT_EQ(lg.value(800.0), 1.0);
  EXPECT_EQ(parse_link("logistic"), LinkKind::logistic);
  EXPECT_EQ(link_name(LinkKind::identity), "identity");
  EXPECT_THROW(parse_link("probit"), std::invalid_argument);
}

TEST(DerivativeBounds, ClippedAtOne) {
  const std::vector<LinkFunction> id(2, LinkFunction{});
  const auto b = derivative_bounds(id, 3.0);
  EXPECT_EQ(b.c1, 1.0);
  EXPECT_EQ(b.c2, 1.0);
  const std::vector<LinkFunction> lg(1, LinkFunction{LinkKind::logistic});
  const auto c = derivative_bounds(lg, 2.0);
  EXPECT_NEAR(c.c1, 0.10499358540350662, 1e-15);
  EXPECT_EQ(c.c2, 1.0);
}

TEST(Bounds, Validation) {
  BoundParams b;
  EXPECT_NO_THROW(b.validate());
  b.delta = 1.0;
  EXPECT_THROW(b.validate(), std::invalid_argument);
  b = {};
  b.lambda = 0.0;
  EXPECT_THROW(b.validate(), std::invalid_argument);
  b = {};
  b.c1 = 2.0;
  EXPECT_THROW(b.validate(), std::invalid_argument);
}

TEST(Feature, UsesContextVectorBeforeFirstPosition) {
  const EnvironmentSpec env = tiny_env();
  const RankedList a{{1, 0}};
  EXPECT_EQ(feature(a, 0, env), (Vec{0.25, 1.25}));
  EXPECT_EQ(feature(a, 1, env), (Vec{1.0, -0.5}));
  EXPECT_THROW(feature(a, 2, env), std::invalid_argument);
}

TEST(Feature, PairwiseWindowIsBitIdentical) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    const EnvironmentSpec env = testutil::random_linear_env(rng, 5, 4, 4, 3.0);
    const WindowSpec win = WindowSpec::from_pairwise(env.w);
    RankedList a;
    for (std::size_t l = 0; l < env.L; ++l) a.items.push_back(rng() % env.K);
    for (std::size_t l = 0; l < env.L; ++l) {
      const Vec x = feature(a, l, env);
      const Vec y = window_feature(a, l, env, win);
      ASSERT_EQ(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)), 0);
    }
  }
}

TEST(Feature, WindowLagsReachBackToContext) {
  const EnvironmentSpec env = tiny_env();
  WindowSpec win;
  win.S = 2;
  win.weights = {{1.0}, {2.0}};
  EXPECT_EQ(window_feature(RankedList{{0, 1}}, 1, env, win), (Vec{2.0, 1.0}));
  win.S = 3;
  win.weights = {{1.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}};
  EXPECT_THROW(win.validate(2), std::invalid_argument);
  EXPECT_NO_THROW(win.validate(3));
  // position 1: v1 + 1 * v0(item) + 2 * v0(context)
  EXPECT_EQ(window_feature(RankedList{{0, 1}}, 1, env.arms, win), (Vec{2.0, 2.0}));
  win.S = 4;
  EXPECT_THROW(win.validate(3), std::invalid_argument);
}

TEST(ExpectedReward, SumsPerPosition) {
  const EnvironmentSpec env = tiny_env();
  const auto r = expected_reward(RankedList{{1, 0}}, env);
  EXPECT_EQ(r.per_position, (Vec{0.25, -0.5}));
  EXPECT_EQ(r.total, -0.25);
  EXPECT_THROW(expected_reward(RankedList{{2, 0}}, env), std::invalid_argument);
  EXPECT_THROW(expected_reward(RankedList{{0}}, env), std::invalid_argument);
}

TEST(Noise, NoiselessRewardsEqualExpected) {
  EnvironmentSpec env = tiny_env();
  env.noise.gaussian_sd = 0.0;
  NoiseStreams s(3);
  const auto out = sample_reward(RankedList{{0, 1}}, env, s);
  EXPECT_EQ(out.rewards, out.expected);
}

TEST(Noise, MonteCarloMean) {
  const EnvironmentSpec env = tiny_env();
  NoiseStreams s(4);
  const RankedList a{{0, 1}};
  const double want = expected_reward(a, env).per_position[0];
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_reward(a, env, s).rewards[0];
  EXPECT_NEAR(sum / n, want, 0.02);
}

TEST(Noise, ContaminationDoesNotShiftGaussianDraws) {
  EnvironmentSpec clean = tiny_env();
  EnvironmentSpec dirty = tiny_env();
  dirty.noise.laplace_scale = 1e-3;
  NoiseStreams a(5), b(5);
  const RankedList list{{1, 1}};
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_reward(list, clean, a);
    const auto y = sample_reward(list, dirty, b);
    for (std::size_t l = 0; l < 2; ++l) EXPECT_NEAR(x.rewards[l], y.rewards[l], 0.05);
  }
}

TEST(Noise, LaplaceMoments) {
  std::mt19937_64 rng(6);
  double m = 0.0, v = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_laplace(rng);
    m += x;
    v += x * x;
  }
  EXPECT_NEAR(m / n, 0.0, 0.02);
  EXPECT_NEAR(v / n, 2.0, 0.05);
}

TEST(Generator, ConstructionMatchesDescription) {
  const EnvironmentSpec env = generate_environment(10, 7, 4, 2.0, 11);
  EXPECT_NO_THROW(env.validate());
  for (const Vec& v : env.arms.vectors) {
    EXPECT_EQ(v.back(), 1.0);
    EXPECT_NEAR(norm2(v), std::sqrt(2.0), 1e-12);
  }
  for (const Vec& t : env.theta) {
    EXPECT_EQ(t.back(), 0.5);
    EXPECT_NEAR(norm2(t), std::sqrt(0.5), 1e-12);
  }
  for (double w : env.w) EXPECT_LE(std::abs(w), 2.0);
  // |<theta, v>| <= 1 for every arm and position
  for (const Vec& t : env.theta)
    for (const Vec& v : env.arms.vectors) EXPECT_LE(std::abs(dot(t, v)), 1.0 + 1e-12);
  EXPECT_EQ(generate_environment(10, 7, 4, 2.0, 11), env);
  EXPECT_NE(generate_environment(10, 7, 4, 2.0, 12), env);
  EXPECT_THROW(generate_environment(1, 7, 4, 2.0, 11), std::invalid_argument);
}

TEST(Environment, ValidationNamesProblem) {
  EnvironmentSpec env = tiny_env();
  env.theta[0] = {3.0, 0.0};
  EXPECT_THROW(env.validate(), std::invalid_argument);
  env = tiny_env();
  env.w.pop_back();
  EXPECT_THROW(env.validate(), std::invalid_argument);
}

TEST(Serialize, EnvironmentRoundTrip) {
  const EnvironmentSpec env = generate_environment(4, 3, 3, 1.5, 2);
  EXPECT_EQ(parse_environment(dump_environment(env)), env);
}

TEST(Serialize, UnknownKeyReportsPath) {
  json j = to_json(tiny_env());
  j["bounds"]["lamda"] = 1.0;
  try {
    environment_from_json(j, "environment");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "environment.bounds.lamda: unknown key");
  }
}

TEST(RankedListText, DashJoined) {
  EXPECT_EQ(to_string(RankedList{{3, 0, 7}}), "3-0-7");
}

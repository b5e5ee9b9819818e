#include "rankbandit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rankbandit/kernels.hpp"

namespace rankbandit {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_position(std::size_t position, std::size_t L) {
  if (position >= L) {
    std::ostringstream os;
    os << "position " << position << " out of range for L = " << L;
    fail(os.str());
  }
}

Vec unit_sphere(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  double norm = 0.0;
  do {
    for (auto& x : v) x = normal(rng);
    norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  } while (norm == 0.0);
  for (auto& x : v) x /= norm;
  return v;
}

bool exceeds(double value, double bound) { return value > bound * (1.0 + 1e-9) + 1e-12; }

}  // namespace

double LinkFunction::value(double z) const {
  return kind == LinkKind::identity ? z : sigmoid(z);
}

double LinkFunction::derivative(double z) const {
  if (kind == LinkKind::identity) return 1.0;
  const double s = sigmoid(z);
  return s * (1.0 - s);
}

std::string_view link_name(LinkKind kind) {
  return kind == LinkKind::identity ? "identity" : "logistic";
}

LinkKind parse_link(std::string_view name) {
  if (name == "identity") return LinkKind::identity;
  if (name == "logistic") return LinkKind::logistic;
  fail("unknown link function '" + std::string(name) + "'");
}

void BoundParams::validate() const {
  for (double v : {m1, m2, m3, c1, c2, lambda})
    if (!(v > 0.0) || !std::isfinite(v)) fail("bounds: m1, m2, m3, c1, c2, lambda must be positive");
  if (!(c1 <= 1.0 && 1.0 <= c2)) fail("bounds: require c1 <= 1 <= c2");
  if (!(delta > 0.0 && delta < 1.0)) fail("bounds: delta must lie in (0, 1)");
}

void NoiseSpec::validate() const {
  if (!(gaussian_sd >= 0.0) || !(laplace_scale >= 0.0))
    fail("noise: gaussian_sd and laplace_scale must be nonnegative");
}

std::string to_string(const RankedList& list) {
  std::string s;
  for (std::size_t i = 0; i < list.items.size(); ++i) {
    if (i > 0) s += '-';
    s += std::to_string(list.items[i]);
  }
  return s;
}

void WindowSpec::validate(std::size_t L) const {
  if (S < 2 || S > L) fail("window: S must satisfy 2 <= S <= L");
  if (weights.size() != L) fail("window: expected one weight row per position");
  for (const auto& row : weights)
    if (row.size() != S - 1) fail("window: each weight row must hold S-1 entries");
}

WindowSpec WindowSpec::from_pairwise(std::span<const double> w) {
  WindowSpec win;
  win.S = 2;
  for (double x : w) win.weights.push_back(Vec{x});
  return win;
}

void EnvironmentSpec::validate() const {
  if (d == 0 || K == 0) fail("environment: d and K must be positive");
  if (L < 1) fail("environment: L must be at least 1");
  if (theta.size() != L || w.size() != L || links.size() != L)
    fail("environment: theta, w and links need one entry per position");
  if (arms.count() != K) fail("environment: arms.vectors must hold K vectors");
  if (arms.v0.size() != d) fail("environment: v0 must have dimension d");
  bounds.validate();
  noise.validate();
  for (std::size_t i = 0; i < K; ++i) {
    if (arms.vectors[i].size() != d) fail("environment: arm vectors must have dimension d");
    if (exceeds(norm2(arms.vectors[i]), bounds.m1))
      fail("environment: arm " + std::to_string(i) + " exceeds the m1 norm bound");
  }
  for (std::size_t l = 0; l < L; ++l) {
    if (theta[l].size() != d) fail("environment: theta vectors must have dimension d");
    if (exceeds(norm2(theta[l]), bounds.m2))
      fail("environment: theta " + std::to_string(l) + " exceeds the m2 norm bound");
    if (exceeds(std::abs(w[l]), bounds.m3))
      fail("environment: w " + std::to_string(l) + " exceeds the m3 bound");
    if (!std::isfinite(w[l])) fail("environment: w must be finite");
  }
}

void check_list(const RankedList& a, std::size_t K, std::size_t L) {
  if (a.size() != L) fail("ranked list has length " + std::to_string(a.size()) +
                          ", expected " + std::to_string(L));
  for (std::size_t item : a.items)
    if (item >= K) fail("ranked list item " + std::to_string(item) + " out of range");
}

Vec feature(const RankedList& a, std::size_t position, const ArmSet& arms,
            std::span<const double> w) {
  check_position(position, a.size());
  if (w.size() < a.size()) fail("feature: w shorter than the list");
  const Vec& cur = arms.vectors.at(a[position]);
  const Vec& prev = position == 0 ? arms.v0 : arms.vectors.at(a[position - 1]);
  const double wl = w[position];
  Vec x(cur.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = cur[k] + wl * prev[k];
  return x;
}

Vec feature(const RankedList& a, std::size_t position, const EnvironmentSpec& env) {
  check_position(position, env.L);
  check_list(a, env.K, env.L);
  return feature(a, position, env.arms, env.w);
}

Vec window_feature(const RankedList& a, std::size_t position, const ArmSet& arms,
                   const WindowSpec& window) {
  check_position(position, a.size());
  if (window.weights.size() < a.size()) fail("window_feature: too few weight rows");
  const Vec& row = window.weights[position];
  Vec x = arms.vectors.at(a[position]);
  for (std::size_t i = 1; i < window.S; ++i) {
    const Vec& prev = position < i ? arms.v0 : arms.vectors.at(a[position - i]);
    const double wi = row[i - 1];
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = x[k] + wi * prev[k];
  }
  return x;
}

Vec window_feature(const RankedList& a, std::size_t position,
                   const EnvironmentSpec& env, const WindowSpec& window) {
  check_position(position, env.L);
  check_list(a, env.K, env.L);
  window.validate(env.L);
  return window_feature(a, position, env.arms, window);
}

ExpectedReward expected_reward(const RankedList& a, const EnvironmentSpec& env) {
  check_list(a, env.K, env.L);
  ExpectedReward out;
  out.per_position.resize(env.L);
  for (std::size_t l = 0; l < env.L; ++l) {
    const Vec x = feature(a, l, env.arms, env.w);
    out.per_position[l] = env.links[l].value(dot(env.theta[l], x));
    out.total += out.per_position[l];
  }
  return out;
}

NoiseStreams::NoiseStreams(std::uint64_t seed) {
  std::seed_seq g{seed, std::uint64_t{0x6761757373ULL}};
  std::seed_seq c{seed, std::uint64_t{0x6c61706c6163ULL}};
  gaussian.seed(g);
  contamination.seed(c);
}

double sample_laplace(std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  const double magnitude = expo(rng);
  return (rng() & 1U) ? -magnitude : magnitude;
}

StepOutcome sample_reward(const RankedList& a, const EnvironmentSpec& env,
                          NoiseStreams& streams) {
  StepOutcome out;
  out.expected = expected_reward(a, env).per_position;
  out.rewards.resize(env.L);
  std::normal_distribution<double> normal;
  for (std::size_t l = 0; l < env.L; ++l) {
    const double g = normal(streams.gaussian);
    const double c = sample_laplace(streams.contamination);
    out.rewards[l] = out.expected[l] + env.noise.gaussian_sd * g +
                     env.noise.laplace_scale * c;
  }
  return out;
}

EnvironmentSpec generate_environment(std::size_t d, std::size_t K, std::size_t L,
                                     double w_max, std::uint64_t seed) {
  if (d < 2) fail("generate_environment: d must be at least 2");
  if (K == 0 || L == 0) fail("generate_environment: need K >= 1 and L >= 1");
  if (!(w_max >= 0.0) || !std::isfinite(w_max))
    fail("generate_environment: w_max must be a nonnegative finite number");
  std::mt19937_64 rng(seed);
  EnvironmentSpec env;
  env.d = d;
  env.K = K;
  env.L = L;
  for (std::size_t l = 0; l < L; ++l) {
    Vec t = unit_sphere(d - 1, rng);
    for (auto& x : t) x *= 0.5;
    t.push_back(0.5);
    env.theta.push_back(std::move(t));
  }
  auto arm = [&] {
    Vec v = unit_sphere(d - 1, rng);
    v.push_back(1.0);
    return v;
  };
  for (std::size_t i = 0; i < K; ++i) env.arms.vectors.push_back(arm());
  env.arms.v0 = arm();
  std::uniform_real_distribution<double> uw(-w_max, w_max);
  for (std::size_t l = 0; l < L; ++l) env.w.push_back(w_max > 0.0 ? uw(rng) : 0.0);
  env.links.assign(L, LinkFunction{LinkKind::identity});
  env.bounds.m1 = std::sqrt(2.0);
  env.bounds.m2 = std::sqrt(2.0) / 2.0;
  env.bounds.m3 = w_max > 0.0 ? w_max : 1e-12;
  const DerivativeBounds db = derivative_bounds(env.links, feature_radius(env));
  env.bounds.c1 = db.c1;
  env.bounds.c2 = db.c2;
  return env;
}

DerivativeBounds derivative_bounds(std::span<const LinkFunction> links, double radius) {
  if (!(radius >= 0.0)) fail("derivative_bounds: radius must be nonnegative");
  DerivativeBounds b;
  for (const auto& link : links) {
    // identity: f' = 1. logistic: f' peaks at 0 and decreases in |z|.
    const double lo = link.kind == LinkKind::identity ? 1.0 : link.derivative(radius);
    const double hi = link.kind == LinkKind::identity ? 1.0 : link.derivative(0.0);
    b.c1 = std::min(b.c1, lo);
    b.c2 = std::max(b.c2, hi);
  }
  return b;
}

double feature_radius(const EnvironmentSpec& env) {
  double wmax = 0.0;
  for (double x : env.w) wmax = std::max(wmax, std::abs(x));
  return env.bounds.m2 * (1.0 + wmax) * env.bounds.m1;
}

}  // namespace rankbandit

#pragma once

#include <functional>
#include <random>
#include <vector>

#include "rankbandit/linalg.hpp"
#include "rankbandit/model.hpp"

namespace testutil {

using rankbandit::Matrix;
using rankbandit::RankedList;
using rankbandit::Vec;

inline Vec gaussian_vec(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> g(0.0, sd);
  Vec v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

inline Vec unit_vec(std::mt19937_64& rng, std::size_t n, double radius = 1.0) {
  Vec v = gaussian_vec(rng, n);
  const double s = rankbandit::norm2(v);
  for (auto& x : v) x *= radius / s;
  return v;
}

// A A^T + n I for a random A.
inline Matrix random_spd(std::mt19937_64& rng, std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n * n; ++i) a.data()[i] = gaussian_vec(rng, 1)[0];
  Matrix s = rankbandit::multiply(a, rankbandit::transpose(a));
  for (std::size_t i = 0; i < n; ++i) s(i, i) += static_cast<double>(n);
  return s;
}

// Calls f on every list in [0, K)^L in lexicographic order.
inline void for_each_list(std::size_t K, std::size_t L, const std::function<void(const RankedList&)>& f) {
  RankedList a{std::vector<std::size_t>(L, 0)};
  while (true) {
    f(a);
    std::size_t i = L;
    while (i > 0 && a.items[i - 1] + 1 == K) a.items[--i] = 0;
    if (i == 0) return;
    ++a.items[i - 1];
  }
}

// Linear environment with unit-ball arms and parameters and w in [-w_max, w_max].
inline rankbandit::EnvironmentSpec random_linear_env(std::mt19937_64& rng, std::size_t d, std::size_t K,
                                                     std::size_t L, double w_max) {
  rankbandit::EnvironmentSpec env;
  env.d = d;
  env.K = K;
  env.L = L;
  std::uniform_real_distribution<double> u(-w_max, w_max);
  for (std::size_t l = 0; l < L; ++l) {
    env.theta.push_back(unit_vec(rng, d));
    env.w.push_back(w_max > 0 ? u(rng) : 0.0);
  }
  for (std::size_t i = 0; i < K; ++i) env.arms.vectors.push_back(unit_vec(rng, d));
  env.arms.v0 = unit_vec(rng, d);
  env.links.assign(L, rankbandit::LinkFunction{});
  env.bounds.m3 = w_max > 0 ? w_max : 1.0;
  env.validate();
  return env;
}

}  // namespace testutil

#pragma once

// Problem definition for ranking with position-item dependencies.
//
// The expected reward at position l of an ordered list a is
//
//   f_l( <theta_l, v_{a_l} + w_l * v_{a_{l-1}}> )
//
// where v_{a_0} is the fixed context vector v0. Positions and arm indices are
// zero-based throughout the library.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankbandit/linalg.hpp"

namespace rankbandit {

enum class LinkKind { identity, logistic };

struct LinkFunction {
  LinkKind kind = LinkKind::identity;

  double value(double z) const;
  double derivative(double z) const;

  friend bool operator==(const LinkFunction&, const LinkFunction&) = default;
};

std::string_view link_name(LinkKind kind);
LinkKind parse_link(std::string_view name);

struct BoundParams {
  double m1 = 1.0;  // arm vector norm bound
  double m2 = 1.0;  // parameter norm bound
  double m3 = 1.0;  // |w_l| bound
  double c1 = 1.0;  // min link derivative (clipped at 1)
  double c2 = 1.0;  // max link derivative (clipped at 1)
  double delta = 0.01;
  double lambda = 1.0;

  void validate() const;
  friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

struct NoiseSpec {
  double gaussian_sd = 1.0;
  double laplace_scale = 0.0;  // contamination amplitude epsilon

  void validate() const;
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct ArmSet {
  std::vector<Vec> vectors;
  Vec v0;

  std::size_t count() const { return vectors.size(); }
  std::size_t dim() const { return v0.size(); }

  // v_index for index < count(); v0 is addressed as index == count().
  const Vec& at(std::size_t index) const {
    return index == vectors.size() ? v0 : vectors[index];
  }

  friend bool operator==(const ArmSet&, const ArmSet&) = default;
};

struct RankedList {
  std::vector<std::size_t> items;

  std::size_t size() const { return items.size(); }
  std::size_t operator[](std::size_t i) const { return items[i]; }

  friend bool operator==(const RankedList&, const RankedList&) = default;
  friend auto operator<=>(const RankedList&, const RankedList&) = default;
};

// "3-0-7"
std::string to_string(const RankedList& list);

struct StepOutcome {
  Vec rewards;
  Vec expected;
};

// w_{l,i} couples position l to the item i positions earlier, i in [1, S-1].
struct WindowSpec {
  std::size_t S = 2;
  std::vector<Vec> weights;  // L rows of S-1 entries

  void validate(std::size_t L) const;
  static WindowSpec from_pairwise(std::span<const double> w);

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

struct EnvironmentSpec {
  std::size_t d = 0;
  std::size_t K = 0;
  std::size_t L = 0;
  std::vector<Vec> theta;
  Vec w;
  ArmSet arms;
  std::vector<LinkFunction> links;
  NoiseSpec noise;
  BoundParams bounds;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

// v_{a_l} + w_l v_{a_{l-1}}, with v0 standing in for position -1.
Vec feature(const RankedList& a, std::size_t position, const ArmSet& arms,
            std::span<const double> w);
Vec feature(const RankedList& a, std::size_t position, const EnvironmentSpec& env);

// v_{a_l} + sum_{i=1}^{S-1} w_{l,i} v_{a_{l-i}}, with v0 for positions before 0.
Vec window_feature(const RankedList& a, std::size_t position, const ArmSet& arms,
                   const WindowSpec& window);
Vec window_feature(const RankedList& a, std::size_t position,
                   const EnvironmentSpec& env, const WindowSpec& window);

struct ExpectedReward {
  Vec per_position;
  double total = 0.0;
};

ExpectedReward expected_reward(const RankedList& a, const EnvironmentSpec& env);

// Independent deterministic streams for one simulation run. Gaussian noise
// and Laplace contamination come from separate engines so that changing the
// contamination amplitude never shifts the Gaussian draws.
struct NoiseStreams {
  std::mt19937_64 gaussian;
  std::mt19937_64 contamination;

  explicit NoiseStreams(std::uint64_t seed);
};

double sample_laplace(std::mt19937_64& rng);

StepOutcome sample_reward(const RankedList& a, const EnvironmentSpec& env,
                          NoiseStreams& streams);

// Synthetic instance: theta_l = (theta'_l / 2, 1/2) and v_i = (v'_i, 1) with
// theta', v' uniform on the unit sphere in R^{d-1}; w_l ~ U[-w_max, w_max].
EnvironmentSpec generate_environment(std::size_t d, std::size_t K, std::size_t L,
                                     double w_max, std::uint64_t seed);

struct DerivativeBounds {
  double c1 = 1.0;
  double c2 = 1.0;
};

// c1 = min{1, min f'(z)}, c2 = max{1, max f'(z)} over |z| <= radius.
DerivativeBounds derivative_bounds(std::span<const LinkFunction> links, double radius);

// m2 * (1 + max_l |w_l|) * m1
double feature_radius(const EnvironmentSpec& env);

void check_list(const RankedList& a, std::size_t K, std::size_t L);

}  // namespace rankbandit

#pragma once

// Closed-form regret upper bounds for overlaying on empirical curves. The
// log-determinant inside each radius is replaced by its worst case
// d log(1 + t M^2 / (d lambda)), so every curve is a function of t alone.

#include <cstddef>
#include <vector>

#include "rankbandit/linalg.hpp"
#include "rankbandit/model.hpp"

namespace rankbandit {

enum class BoundTheorem { rank_ucb = 1, gen_rank_ucb = 2, rank_ts = 3, win_rank_ucb = 4 };

BoundTheorem parse_theorem(int id);

struct BoundInputs {
  BoundParams bounds;
  std::size_t d = 1;
  std::size_t L = 1;
  Vec w;                             // pairwise weights, one per position
  std::vector<Vec> window_weights;   // lag weights for the window bound; empty = use w
};

// Right-hand side at horizon t (t >= 1).
double bound_value(BoundTheorem theorem, const BoundInputs& in, double t);

// bound_value at t = 1..T.
Vec bound_curve(BoundTheorem theorem, const BoundInputs& in, std::size_t T);

}  // namespace rankbandit

#include "rankbandit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rankbandit {
namespace {

double max_abs(const Vec& w) {
  double m = 0.0;
  for (double x : w) m = std::max(m, std::abs(x));
  return m;
}

double max_row_l1(const std::vector<Vec>& rows) {
  double m = 0.0;
  for (const Vec& r : rows) {
    double s = 0.0;
    for (double x : r) s += std::abs(x);
    m = std::max(m, s);
  }
  return m;
}

}  // namespace

BoundTheorem parse_theorem(int id) {
  if (id < 1 || id > 4) throw std::invalid_argument("theorem must be 1, 2, 3 or 4, got " + std::to_string(id));
  return static_cast<BoundTheorem>(id);
}

double bound_value(BoundTheorem theorem, const BoundInputs& in, double t) {
  in.bounds.validate();
  if (in.d == 0 || in.L == 0) throw std::invalid_argument("bound_value: d and L must be positive");
  if (!(t >= 1.0)) throw std::invalid_argument("bound_value: t must be at least 1");
  const BoundParams& b = in.bounds;
  const double d = static_cast<double>(in.d);
  const double L = static_cast<double>(in.L);
  const double lam = b.lambda;
  const double log_delta = std::log(1.0 / b.delta);
  const double ratio = b.c2 / b.c1;

  switch (theorem) {
    case BoundTheorem::rank_ucb:
    case BoundTheorem::win_rank_ucb: {
      const double spread = theorem == BoundTheorem::rank_ucb || in.window_weights.empty()
                                ? max_abs(in.w)
                                : max_row_l1(in.window_weights);
      const double M = (1.0 + spread) * b.m1;
      const double lg = std::log1p(t * M * M / (d * lam));
      const double root_beta = std::sqrt(lam) * b.m2 + std::sqrt(2.0 * log_delta + d * lg);
      return 2.0 * std::sqrt(2.0) * ratio * L * std::sqrt(d * t * root_beta * root_beta * lg);
    }
    case BoundTheorem::gen_rank_ucb: {
      const double lg = std::log1p(2.0 * t * b.m2 * b.m2 / (d * lam));
      const double root_beta = std::sqrt(lam) * b.m2 * std::sqrt(1.0 + b.m3 * b.m3) +
                               std::sqrt(2.0 * log_delta + 2.0 * d * lg);
      return 4.0 * ratio * L * std::sqrt(d * t * root_beta * root_beta * lg);
    }
    case BoundTheorem::rank_ts: {
      const double M = (1.0 + max_abs(in.w)) * b.m1;
      const double lg = std::log1p(t * M * M / (d * lam));
      const double beta = 1.0 + std::sqrt(4.0 * std::log(t) + d * lg);
      return 2.0 * L * (1.0 + std::sqrt(2.0 * t * d * beta * beta * lg));
    }
  }
  throw std::invalid_argument("bound_value: unknown theorem");
}

Vec bound_curve(BoundTheorem theorem, const BoundInputs& in, std::size_t T) {
  Vec out(T);
  for (std::size_t t = 1; t <= T; ++t) out[t - 1] = bound_value(theorem, in, static_cast<double>(t));
  return out;
}

}  // namespace rankbandit

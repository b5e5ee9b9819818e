#include "rankbandit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rankbandit/errors.hpp"
#include "rankbandit/kernels.hpp"

namespace rankbandit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / base)
      throw std::invalid_argument("layered graph too large");
    r *= base;
  }
  return r;
}

std::string tuple_text(const std::vector<std::size_t>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) s += ':';
    s += std::to_string(t[i]);
  }
  return s;
}

// best[l][v]: best weight of a path from vertex v of layer l to the last layer
using Table = std::vector<Vec>;

void sweep_layer(const LayeredGraph& g, std::size_t l, Table& best, std::size_t begin,
                 std::size_t end) {
  const auto& k = simd::kernels();
  const std::size_t K = g.K();
  const Vec& next = best[l + 1];
  Vec& cur = best[l];
  for (std::size_t v = begin; v < end; ++v)
    cur[v] = k.max_plus(g.edge_row(l, v).data(), next.data() + g.successor_base(l, v), K);
}

Table backward_table(const LayeredGraph& g, unsigned threads) {
  Table best(g.L());
  for (std::size_t l = 0; l < g.L(); ++l) best[l].assign(g.layer_size(l), 0.0);
  for (std::size_t l = g.L() - 1; l-- > 0;) {
    const std::size_t n = g.layer_size(l);
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
      sweep_layer(g, l, best, 0, n);
      continue;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(n, b + chunk);
      if (b >= e) break;
      pool.emplace_back([&, b, e] { sweep_layer(g, l, best, b, e); });
    }
    for (auto& t : pool) t.join();
  }
  return best;
}

PathResult decode_from(const LayeredGraph& g, const Table& best, std::size_t root) {
  PathResult r;
  r.weight = best[0][root];
  if (!(r.weight > kNegInf)) throw NumericError("layered graph has no complete path");
  std::size_t v = root;
  r.vertices.push_back(v);
  r.items.items.push_back(g.last_item(0, v));
  for (std::size_t l = 0; l + 1 < g.L(); ++l) {
    const auto row = g.edge_row(l, v);
    const std::size_t base = g.successor_base(l, v);
    std::size_t chosen = g.K();
    for (std::size_t q = 0; q < g.K(); ++q) {
      if (row[q] + best[l + 1][base + q] == best[l][v]) {
        chosen = q;
        break;
      }
    }
    if (chosen == g.K()) throw NumericError("longest path decode lost the optimum");
    v = base + chosen;
    r.vertices.push_back(v);
    r.items.items.push_back(chosen);
  }
  return r;
}

std::size_t best_root(const Vec& values, bool maximize) {
  std::size_t arg = 0;
  for (std::size_t v = 1; v < values.size(); ++v)
    if (maximize ? values[v] > values[arg] : values[v] < values[arg]) arg = v;
  return arg;
}

}  // namespace

LayeredGraph::LayeredGraph(std::size_t K, std::size_t L, std::size_t S, bool forbid)
    : K_(K), L_(L), S_(S), forbid_(forbid) {
  for (std::size_t l = 0; l < L; ++l) sizes_.push_back(checked_pow(K, tuple_length(l)));
  for (std::size_t l = 0; l + 1 < L; ++l) weights_.emplace_back(sizes_[l] * K, 0.0);
  if (forbid_)
    for (std::size_t l = 0; l + 1 < L; ++l)
      for (std::size_t v = 0; v < sizes_[l]; ++v) weights_[l][v * K + last_item(l, v)] = kNegInf;
}

LayeredGraph LayeredGraph::build(std::size_t K, std::size_t L, bool forbid_adjacent_repeat) {
  return build_window(K, L, 2, forbid_adjacent_repeat);
}

LayeredGraph LayeredGraph::build_window(std::size_t K, std::size_t L, std::size_t S,
                                        bool forbid_adjacent_repeat) {
  if (K < 1) throw std::invalid_argument("layered graph: K must be at least 1");
  if (L < 2) throw std::invalid_argument("layered graph: L must be at least 2");
  if (S < 2 || S > L) throw std::invalid_argument("layered graph: S must satisfy 2 <= S <= L");
  if (forbid_adjacent_repeat && K < 2)
    throw std::invalid_argument("layered graph: forbidding repeats needs K >= 2");
  return LayeredGraph(K, L, S, forbid_adjacent_repeat);
}

std::size_t LayeredGraph::num_vertices() const {
  std::size_t n = 0;
  for (std::size_t s : sizes_) n += s;
  return n;
}

std::size_t LayeredGraph::num_edges() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < L_; ++l) n += sizes_[l] * (forbid_ ? K_ - 1 : K_);
  return n;
}

std::vector<std::size_t> LayeredGraph::tuple(std::size_t layer, std::size_t v) const {
  std::vector<std::size_t> t(tuple_length(layer));
  for (std::size_t i = t.size(); i-- > 0;) {
    t[i] = v % K_;
    v /= K_;
  }
  return t;
}

void LayeredGraph::assign_weights(const std::vector<Vec>& node_values) {
  if (node_values.size() != L_)
    throw std::invalid_argument("assign_weights: expected one value row per layer");
  for (std::size_t l = 0; l < L_; ++l) {
    if (node_values[l].size() != sizes_[l])
      throw std::invalid_argument("assign_weights: missing values for layer " + std::to_string(l));
    for (double x : node_values[l])
      if (!std::isfinite(x))
        throw NumericError("assign_weights: non-finite value on layer " + std::to_string(l));
  }
  const auto& k = simd::kernels();
  for (std::size_t l = 0; l + 1 < L_; ++l) {
    const double head = l == 0 ? 1.0 : 0.5;
    const double tail = l + 2 == L_ ? 1.0 : 0.5;
    const Vec& next = node_values[l + 1];
    for (std::size_t v = 0; v < sizes_[l]; ++v) {
      double* row = weights_[l].data() + v * K_;
      k.affine_row(row, head * node_values[l][v], tail, next.data() + successor_base(l, v), K_);
      if (forbid_) row[last_item(l, v)] = kNegInf;
    }
  }
}

LayeredGraph LayeredGraph::negated() const {
  LayeredGraph g = *this;
  for (std::size_t l = 0; l + 1 < L_; ++l)
    for (std::size_t v = 0; v < sizes_[l]; ++v)
      for (std::size_t q = 0; q < K_; ++q)
        if (has_edge(l, v, q)) g.weights_[l][v * K_ + q] = -weights_[l][v * K_ + q];
  return g;
}

std::string LayeredGraph::layering_violation() const {
  std::ostringstream os;
  if (sizes_.size() != L_) return "layer count differs from L";
  if (sizes_[0] != K_) return "first layer must hold K vertices";
  for (std::size_t l = 0; l + 1 < L_; ++l) {
    std::vector<char> reached(sizes_[l + 1], 0);
    for (std::size_t v = 0; v < sizes_[l]; ++v) {
      const auto src = tuple(l, v);
      for (std::size_t q = 0; q < K_; ++q) {
        if (!has_edge(l, v, q)) continue;
        const std::size_t u = successor_base(l, v) + q;
        if (u >= sizes_[l + 1]) {
          os << "edge from layer " << l << " vertex " << v << " leaves layer " << l + 1;
          return os.str();
        }
        auto expect = src;
        if (expect.size() == S_) expect.erase(expect.begin());
        expect.push_back(q);
        if (tuple(l + 1, u) != expect) {
          os << "edge " << tuple_text(src) << " -> " << tuple_text(tuple(l + 1, u))
             << " is not a left shift";
          return os.str();
        }
        reached[u] = 1;
      }
    }
    for (std::size_t u = 0; u < sizes_[l + 1]; ++u) {
      // with repeats forbidden, tuples holding an adjacent repeat are unreachable
      const auto t = tuple(l + 1, u);
      bool repeat = false;
      for (std::size_t i = 1; i < t.size(); ++i) repeat |= t[i] == t[i - 1];
      if (!reached[u] && !(forbid_ && repeat)) {
        os << "vertex " << tuple_text(t) << " on layer " << l + 1 << " has no predecessor";
        return os.str();
      }
    }
  }
  return {};
}

void LayeredGraph::dump(std::ostream& os) const {
  char buf[64];
  for (std::size_t l = 0; l + 1 < L_; ++l)
    for (std::size_t v = 0; v < sizes_[l]; ++v) {
      const std::string src = tuple_text(tuple(l, v));
      for (std::size_t q = 0; q < K_; ++q) {
        if (!has_edge(l, v, q)) continue;
        std::snprintf(buf, sizeof buf, "%.17g", edge_weight(l, v, q));
        os << l << ' ' << src << ' ' << tuple_text(tuple(l + 1, successor_base(l, v) + q)) << ' '
           << buf << '\n';
      }
    }
}

std::vector<Vec> pairwise_node_values(
    const LayeredGraph& g,
    const std::function<double(std::size_t, std::size_t, std::size_t)>& value) {
  if (g.S() != 2) throw std::invalid_argument("pairwise_node_values: graph is not pairwise");
  std::vector<Vec> out(g.L());
  const std::size_t K = g.K();
  out[0].resize(K);
  for (std::size_t j = 0; j < K; ++j) out[0][j] = value(0, K, j);
  for (std::size_t l = 1; l < g.L(); ++l) {
    out[l].resize(K * K);
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) out[l][i * K + j] = value(l, i, j);
  }
  return out;
}

std::vector<Vec> tuple_node_values(
    const LayeredGraph& g,
    const std::function<double(std::size_t, std::span<const std::size_t>)>& value) {
  std::vector<Vec> out(g.L());
  for (std::size_t l = 0; l < g.L(); ++l) {
    out[l].resize(g.layer_size(l));
    for (std::size_t v = 0; v < g.layer_size(l); ++v) out[l][v] = value(l, g.tuple(l, v));
  }
  return out;
}

PathResult longest_path(const LayeredGraph& g) {
  const Table best = backward_table(g, 1);
  return decode_from(g, best, best_root(best[0], true));
}

PathResult shortest_path(const LayeredGraph& g) {
  constexpr double kPosInf = std::numeric_limits<double>::infinity();
  Table best(g.L());
  for (std::size_t l = 0; l < g.L(); ++l) best[l].assign(g.layer_size(l), 0.0);
  for (std::size_t l = g.L() - 1; l-- > 0;)
    for (std::size_t v = 0; v < g.layer_size(l); ++v) {
      double m = kPosInf;
      const std::size_t base = g.successor_base(l, v);
      for (std::size_t q = 0; q < g.K(); ++q)
        if (g.has_edge(l, v, q)) m = std::min(m, g.edge_weight(l, v, q) + best[l + 1][base + q]);
      best[l][v] = m;
    }
  const std::size_t root = best_root(best[0], false);
  PathResult r;
  r.weight = best[0][root];
  std::size_t v = root;
  r.vertices.push_back(v);
  r.items.items.push_back(g.last_item(0, v));
  for (std::size_t l = 0; l + 1 < g.L(); ++l) {
    const std::size_t base = g.successor_base(l, v);
    std::size_t chosen = g.K();
    for (std::size_t q = 0; q < g.K() && chosen == g.K(); ++q)
      if (g.has_edge(l, v, q) && g.edge_weight(l, v, q) + best[l + 1][base + q] == best[l][v])
        chosen = q;
    if (chosen == g.K()) throw NumericError("shortest path decode lost the optimum");
    v = base + chosen;
    r.vertices.push_back(v);
    r.items.items.push_back(chosen);
  }
  return r;
}

std::vector<PathResult> per_root_solve(const LayeredGraph& g, unsigned threads) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  const Table best = backward_table(g, threads);
  std::vector<PathResult> out(g.layer_size(0));
  for (std::size_t root = 0; root < out.size(); ++root) out[root] = decode_from(g, best, root);
  return out;
}

double path_weight(const LayeredGraph& g, const RankedList& items) {
  check_list(items, g.K(), g.L());
  std::size_t v = items[0];
  double total = 0.0;
  for (std::size_t l = 0; l + 1 < g.L(); ++l) {
    total += g.edge_weight(l, v, items[l + 1]);
    v = g.successor_base(l, v) + items[l + 1];
  }
  return total;
}

}  // namespace rankbandit

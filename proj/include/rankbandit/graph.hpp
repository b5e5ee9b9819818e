#pragma once

// The L-layered super-arm graph.
//
// Layer l (zero-based, one per list position) holds one vertex per tuple of
// the last min(l+1, S) items, oldest first, encoded in base K. Pairwise
// dependencies use S = 2: layer 0 has K vertices (v0, j), later layers K^2
// vertices (i, j). An edge joins a vertex to every vertex whose tuple is its
// left shift with one new item q appended, so the out-edges of vertex v are
// the K contiguous vertices starting at successor_base(l, v), and edge
// weights are stored densely as weights[l][v * K + q].
//
// Every full path spells an ordered list; with weights from
// assign_weights() its total weight is the sum of per-position values.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rankbandit/linalg.hpp"
#include "rankbandit/model.hpp"

namespace rankbandit {

class LayeredGraph {
 public:
  // Pairwise (S = 2) graph.
  static LayeredGraph build(std::size_t K, std::size_t L,
                            bool forbid_adjacent_repeat = false);

  // Window graph over S-tuples, 2 <= S <= L.
  static LayeredGraph build_window(std::size_t K, std::size_t L, std::size_t S,
                                   bool forbid_adjacent_repeat = false);

  std::size_t K() const { return K_; }
  std::size_t L() const { return L_; }
  std::size_t S() const { return S_; }
  bool forbids_adjacent_repeat() const { return forbid_; }

  std::size_t layer_size(std::size_t layer) const { return sizes_.at(layer); }
  std::size_t tuple_length(std::size_t layer) const { return layer + 1 < S_ ? layer + 1 : S_; }
  std::size_t num_vertices() const;
  std::size_t num_edges() const;

  std::size_t successor_base(std::size_t layer, std::size_t v) const {
    const std::size_t keep = tuple_length(layer) < S_ ? v : v % (sizes_[layer] / K_);
    return keep * K_;
  }
  std::size_t last_item(std::size_t /*layer*/, std::size_t v) const { return v % K_; }
  bool has_edge(std::size_t layer, std::size_t v, std::size_t q) const {
    return !forbid_ || q != last_item(layer, v);
  }

  // Items of vertex v at `layer`, oldest first.
  std::vector<std::size_t> tuple(std::size_t layer, std::size_t v) const;

  double edge_weight(std::size_t layer, std::size_t v, std::size_t q) const {
    return weights_[layer][v * K_ + q];
  }
  std::span<const double> edge_row(std::size_t layer, std::size_t v) const {
    return {weights_[layer].data() + v * K_, K_};
  }

  // node_values[l][v] is the value of the super-arm at vertex v of layer l.
  // The edge v -> u from layer l gets (a * value_l(v) + b * value_{l+1}(u)) / 2
  // with a = 2 on the first layer and b = 2 into the last layer (1 otherwise),
  // so the weights along any full path telescope to the sum of node values.
  void assign_weights(const std::vector<Vec>& node_values);

  // Scales every edge weight by -1 (removed edges stay removed).
  [[nodiscard]] LayeredGraph negated() const;

  // Structural check of the layering: edges only join consecutive layers,
  // successor tuples are left shifts, and every vertex past layer 0 has a
  // predecessor. Returns an empty string when valid, else a description.
  std::string layering_violation() const;

  // One line per edge: "layer src_tuple dst_tuple weight", tuples as
  // colon-separated items, layer zero-based.
  void dump(std::ostream& os) const;

 private:
  LayeredGraph(std::size_t K, std::size_t L, std::size_t S, bool forbid);

  std::size_t K_ = 0;
  std::size_t L_ = 0;
  std::size_t S_ = 2;
  bool forbid_ = false;
  std::vector<std::size_t> sizes_;
  std::vector<Vec> weights_;  // L-1 dense rows of size sizes_[l] * K
};

// Node values for a pairwise graph from value(layer, prev, item); prev == K
// stands for v0 on layer 0.
std::vector<Vec> pairwise_node_values(
    const LayeredGraph& g,
    const std::function<double(std::size_t, std::size_t, std::size_t)>& value);

// Node values for any window graph from value(layer, tuple).
std::vector<Vec> tuple_node_values(
    const LayeredGraph& g,
    const std::function<double(std::size_t, std::span<const std::size_t>)>& value);

struct PathResult {
  std::vector<std::size_t> vertices;  // one vertex index per layer
  RankedList items;
  double weight = 0.0;
};

// Exact maximum-weight full path by a backward dynamic program over the
// layers. Among optimal paths the lexicographically smallest item list wins.
PathResult longest_path(const LayeredGraph& g);

// Minimum-weight full path, same tie rule.
PathResult shortest_path(const LayeredGraph& g);

// Best path through each first-layer root, in root order. The backward sweep
// is split across `threads` workers (0 = hardware concurrency); the result
// does not depend on the thread count.
std::vector<PathResult> per_root_solve(const LayeredGraph& g, unsigned threads = 1);

// Sum of edge weights along the path spelled by `items`.
double path_weight(const LayeredGraph& g, const RankedList& items);

}  // namespace rankbandit

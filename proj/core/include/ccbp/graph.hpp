#pragma once

// Undirected simple graphs with a canonical, deterministic indexing of both
// undirected edges and directed edges (ordered node pairs).  Directed edge
// indices address per-edge message and weight storage throughout the library.

#include <cstdint>
#include <utility>
#include <vector>

namespace ccbp {

class Graph {
 public:
  Graph() = default;

  // Edges may be given in any order/orientation; they are normalised to
  // (min,max) and sorted.  Self-loops and duplicates are rejected.
  Graph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int directed_count() const { return 2 * edge_count(); }

  // Neighbors of i in ascending order.
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }

  // Undirected edges as (min,max) pairs, sorted lexicographically; the
  // position of a pair in this list is its edge index.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool has_edge(int i, int j) const;
  int edge_index(int i, int j) const;  // undirected; throws if absent

  // Directed edges are grouped by source node, targets ascending, so index
  // order enumerates (i,j) in lexicographic order.
  int directed_index(int i, int j) const;            // i -> j
  std::pair<int, int> directed_pair(int d) const;    // (source, target)

  bool connected() const;
  bool is_tree() const;  // connected and |E| == n-1

 private:
  int slot_of(int i, int j) const;  // position of j in adj_[i], or -1

  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> adj_offset_;  // prefix sums of degrees; size n_+1
  std::vector<int> adj_edge_;    // undirected edge id per adjacency slot
};

// G(n,p): each of the n(n-1)/2 pairs is an edge independently with
// probability p.  Pairs are visited in lexicographic order, one uniform
// draw per pair, so results are reproducible for a given seed.
Graph random_graph(int n, double p, std::uint64_t seed);

// width x height 4-connected grid; node id = row * width + col.
Graph grid_graph(int width, int height);

}  // namespace ccbp

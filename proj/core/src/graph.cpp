#include "ccbp/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ccbp/rng.hpp"

namespace ccbp {

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges)
    : n_(node_count) {
  if (n_ < 0) throw std::invalid_argument("graph: negative node count");
  for (auto& [i, j] : edges) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (i == j) throw std::invalid_argument("graph: self-loop");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("graph: duplicate edge");
  edges_ = std::move(edges);

  adj_.assign(n_, {});
  for (auto [i, j] : edges_) {
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());

  adj_offset_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i)
    adj_offset_[i + 1] = adj_offset_[i] + degree(i);

  adj_edge_.assign(adj_offset_[n_], -1);
  for (int e = 0; e < edge_count(); ++e) {
    auto [i, j] = edges_[e];
    adj_edge_[adj_offset_[i] + slot_of(i, j)] = e;
    adj_edge_[adj_offset_[j] + slot_of(j, i)] = e;
  }
}

int Graph::slot_of(int i, int j) const {
  const auto& nb = adj_[i];
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return -1;
  return static_cast<int>(it - nb.begin());
}

bool Graph::has_edge(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j) return false;
  return slot_of(i, j) >= 0;
}

int Graph::edge_index(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("edge_index: node out of range");
  const int s = slot_of(i, j);
  if (s < 0)
    throw std::invalid_argument("edge_index: no edge {" + std::to_string(i) +
                                "," + std::to_string(j) + "}");
  return adj_edge_[adj_offset_[i] + s];
}

int Graph::directed_index(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("directed_index: node out of range");
  const int s = slot_of(i, j);
  if (s < 0)
    throw std::invalid_argument("directed_index: no edge (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ")");
  return adj_offset_[i] + s;
}

std::pair<int, int> Graph::directed_pair(int d) const {
  if (d < 0 || d >= directed_count())
    throw std::invalid_argument("directed_pair: index out of range");
  auto it = std::upper_bound(adj_offset_.begin(), adj_offset_.end(), d);
  const int i = static_cast<int>(it - adj_offset_.begin()) - 1;
  return {i, adj_[i][d - adj_offset_[i]]};
}

bool Graph::connected() const {
  if (n_ == 0) return true;
  std::vector<char> seen(n_, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j : adj_[i])
      if (!seen[j]) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
  }
  return count == n_;
}

bool Graph::is_tree() const {
  return n_ >= 1 && edge_count() == n_ - 1 && connected();
}

Graph random_graph(int n, double p, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("random_graph: negative n");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("random_graph: p must lie in [0,1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

Graph grid_graph(int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("grid_graph: dimensions must be positive");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(width) * (height - 1) +
                static_cast<std::size_t>(height) * (width - 1));
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const int id = r * width + c;
      if (c + 1 < width) edges.emplace_back(id, id + 1);
      if (r + 1 < height) edges.emplace_back(id, id + width);
    }
  return Graph(width * height, std::move(edges));
}

}  // namespace ccbp

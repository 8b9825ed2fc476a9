#include "ccbp/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccbp {

namespace {

// g_k(x_k) + h_{k,parent}(x_k, x_parent)
double pair_term(const GraphicalModel& model, const TreeDecomposition& tree,
                 int k, std::span<const int> x) {
  const int p = tree.parent[k];
  return model.node_cost(k, x[k]) + model.edge_cost(k, p, x[k], x[p]);
}

void check_labelling(const GraphicalModel& model, std::span<const int> x) {
  if (static_cast<int>(x.size()) != model.node_count())
    throw std::invalid_argument("weighted_energy: labelling size mismatch");
  for (int v : x)
    if (v < 0 || v >= model.label_count())
      throw std::invalid_argument("weighted_energy: label out of range");
}

void check_weights(const Graph& graph, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != graph.directed_count())
    throw std::invalid_argument("tree: one weight per directed edge expected");
}

}  // namespace

TreeDecomposition root_tree(const Graph& graph, int root) {
  if (!graph.is_tree()) throw std::invalid_argument("root_tree: not a tree");
  const int n = graph.node_count();
  if (root < 0 || root >= n)
    throw std::invalid_argument("root_tree: root out of range");

  TreeDecomposition t;
  t.root = root;
  t.parent.assign(n, -1);
  t.children.assign(n, {});
  t.descendants.assign(n, {});
  t.depth.assign(n, 0);
  t.subtree_depth.assign(n, 1);

  // BFS from the root; neighbors are sorted, so children come out ascending.
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<int> queue = {root};
  seen[root] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int i = queue[head];
    order.push_back(i);
    for (int j : graph.neighbors(i))
      if (!seen[j]) {
        seen[j] = 1;
        t.parent[j] = i;
        t.depth[j] = t.depth[i] + 1;
        t.children[i].push_back(j);
        queue.push_back(j);
      }
  }

  int max_depth = 0;
  for (int i = 0; i < n; ++i) max_depth = std::max(max_depth, t.depth[i]);
  t.layers.assign(max_depth + 1, {});
  for (int i = 0; i < n; ++i) t.layers[t.depth[i]].push_back(i);

  // Bottom-up passes in reverse BFS order.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int i = *it;
    for (int c : t.children[i]) {
      t.subtree_depth[i] =
          std::max(t.subtree_depth[i], 1 + t.subtree_depth[c]);
      t.descendants[i].push_back(c);
      t.descendants[i].insert(t.descendants[i].end(),
                              t.descendants[c].begin(),
                              t.descendants[c].end());
    }
    std::sort(t.descendants[i].begin(), t.descendants[i].end());
  }
  return t;
}

double path_weight(const TreeDecomposition& tree, const Graph& graph,
                   std::span<const double> weights, int k, int i) {
  check_weights(graph, weights);
  const int n = graph.node_count();
  if (k < 0 || k >= n || i < 0 || i >= n)
    throw std::invalid_argument("path_weight: node out of range");
  double w = 1.0;
  int cur = k;
  while (cur != i) {
    const int p = tree.parent[cur];
    if (p < 0)
      throw std::invalid_argument(
          "path_weight: target is not an ancestor of the start node");
    w *= weights[graph.directed_index(cur, p)];
    cur = p;
  }
  return w;
}

double weighted_energy(const GraphicalModel& model,
                       std::span<const double> weights, double gamma,
                       const TreeDecomposition& tree,
                       std::span<const int> x) {
  const Graph& graph = model.graph();
  check_labelling(model, x);
  check_weights(graph, weights);
  double e = model.node_cost(tree.root, x[tree.root]);
  for (int i : tree.children[tree.root]) {
    // Group the subtree hanging from i into layers by distance from i.
    std::vector<std::vector<int>> sub_layers(tree.subtree_depth[i]);
    sub_layers[0].push_back(i);
    for (int k : tree.descendants[i])
      sub_layers[tree.depth[k] - tree.depth[i]].push_back(k);
    for (int d = 0; d < static_cast<int>(sub_layers.size()); ++d)
      for (int k : sub_layers[d])
        e += std::pow(gamma, d) * path_weight(tree, graph, weights, k, i) *
             pair_term(model, tree, k, x);
  }
  return e;
}

double weighted_energy_edge_walk(const GraphicalModel& model,
                                 std::span<const double> weights, double gamma,
                                 const TreeDecomposition& tree,
                                 std::span<const int> x) {
  const Graph& graph = model.graph();
  check_labelling(model, x);
  check_weights(graph, weights);
  double e = model.node_cost(tree.root, x[tree.root]);
  for (int k = 0; k < graph.node_count(); ++k) {
    if (k == tree.root) continue;
    // Walk up to the child of the root on k's path, collecting the weight
    // product and the hop count (= distance from that child).
    double coeff = 1.0;
    int hops = 0;
    int cur = k;
    while (tree.parent[cur] != tree.root) {
      coeff *= weights[graph.directed_index(cur, tree.parent[cur])];
      cur = tree.parent[cur];
      ++hops;
    }
    e += std::pow(gamma, hops) * coeff * pair_term(model, tree, k, x);
  }
  return e;
}

std::vector<double> weighted_min_marginal(const GraphicalModel& model,
                                          std::span<const double> weights,
                                          double gamma, int root,
                                          long long budget) {
  const TreeDecomposition tree = root_tree(model.graph(), root);
  std::vector<double> out(model.label_count(),
                          std::numeric_limits<double>::infinity());
  for_each_labelling(model.node_count(), model.label_count(), budget,
                     [&](const std::vector<int>& x) {
                       const double e =
                           weighted_energy(model, weights, gamma, tree, x);
                       out[x[root]] = std::min(out[x[root]], e);
                     });
  return out;
}

std::vector<double> brute_F(const GraphicalModel& model,
                            std::span<const double> weights, double gamma,
                            const TreeDecomposition& tree, int i,
                            long long budget) {
  const Graph& graph = model.graph();
  check_weights(graph, weights);
  if (i < 0 || i >= graph.node_count())
    throw std::invalid_argument("brute_F: node out of range");
  if (i == tree.root)
    throw std::invalid_argument("brute_F: the root has no incoming edge");

  const int m = model.label_count();
  const auto& desc = tree.descendants[i];
  std::vector<int> x(graph.node_count(), 0);
  std::vector<double> out(m, std::numeric_limits<double>::infinity());
  for (int a = 0; a < m; ++a) {
    x[i] = a;
    for_each_labelling(
        static_cast<int>(desc.size()), m, budget,
        [&](const std::vector<int>& sub) {
          for (std::size_t t = 0; t < desc.size(); ++t) x[desc[t]] = sub[t];
          double s = 0;
          for (int k : desc) {
            const int d = tree.depth[k] - tree.depth[i];
            s += std::pow(gamma, d) * path_weight(tree, graph, weights, k, i) *
                 pair_term(model, tree, k, x);
          }
          out[a] = std::min(out[a], s);
        });
  }
  return out;
}

}  // namespace ccbp

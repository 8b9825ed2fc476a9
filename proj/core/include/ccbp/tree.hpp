#pragma once

// Rooted-tree machinery for the exact characterisation of the weighted
// fixed point on trees.  For a tree rooted at j, the weighted energy
//
//   E_j(x) = g_j(x_j) + sum_{i in N(j)} sum_{d=0}^{R-1} sum_{k at depth d
//            below i} gamma^d w(k,i) H_{k,P(k)}(x_k, x_{P(k)})
//
// discounts each pairwise term H_{k,P(k)} = g_k + h_{k,P(k)} by gamma^d and
// by the product of edge weights on the path from k up to the root's child
// i.  With all weights 1 and gamma = 1 it reduces to the ordinary energy.
// The min-sum weighted fixed point computes exact min-marginals of E_j.

#include <span>
#include <vector>

#include "ccbp/model.hpp"
#include "ccbp/oracle.hpp"

namespace ccbp {

struct TreeDecomposition {
  int root = 0;
  std::vector<int> parent;                    // -1 for the root
  std::vector<std::vector<int>> children;     // ascending
  std::vector<std::vector<int>> descendants;  // ascending, proper (excl. self)
  std::vector<int> depth;                     // root has depth 0
  std::vector<std::vector<int>> layers;       // layers[d] = nodes at depth d
  std::vector<int> subtree_depth;             // leaves have 1
};

// BFS decomposition; throws if the graph is not a tree.
TreeDecomposition root_tree(const Graph& graph, int root);

// Product of weights over the directed child->parent edges on the path from
// k up to its ancestor i; path_weight(.., i, i) == 1.  Throws when i is not
// an ancestor-or-self of k.
double path_weight(const TreeDecomposition& tree, const Graph& graph,
                   std::span<const double> weights, int k, int i);

// Layer-by-layer evaluation of E_root(x), following the definition above.
double weighted_energy(const GraphicalModel& model,
                       std::span<const double> weights, double gamma,
                       const TreeDecomposition& tree,
                       std::span<const int> labelling);

// Same quantity computed independently: one walk up per non-root node,
// accumulating the hop count and weight product along the way.
double weighted_energy_edge_walk(const GraphicalModel& model,
                                 std::span<const double> weights, double gamma,
                                 const TreeDecomposition& tree,
                                 std::span<const int> labelling);

// result[t] = min over labellings with x_root = t of E_root(x).
std::vector<double> weighted_min_marginal(
    const GraphicalModel& model, std::span<const double> weights, double gamma,
    int root, long long budget = kDefaultEnumerationBudget);

// Exact correction term of the edge parent(i) -> i at the weighted fixed
// point: F(x_i) = min over assignments of i's descendants of the discounted
// subtree terms strictly below i.  Equals gamma * sum of weighted incoming
// fixed-point messages of i (excluding the parent's).
std::vector<double> brute_F(const GraphicalModel& model,
                            std::span<const double> weights, double gamma,
                            const TreeDecomposition& tree, int i,
                            long long budget = kDefaultEnumerationBudget);

}  // namespace ccbp

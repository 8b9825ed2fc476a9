#pragma once

// Pairwise models over discrete labels.  Costs are stored in negative-log
// form: node costs g_i (length m) and edge costs h_ij (m x m), so that the
// unnormalised density is exp(-g_i(x_i)) * exp(-h_ij(x_i,x_j)) over nodes
// and edges.  Edge costs are stored once per undirected edge under the
// (min,max) orientation; the accessor transposes for the reverse direction,
// which keeps h_ij(a,b) == h_ji(b,a) by construction.

#include <cstdint>
#include <span>
#include <vector>

#include "ccbp/graph.hpp"

namespace ccbp {

class GraphicalModel {
 public:
  GraphicalModel() = default;

  // Per-edge costs, aligned with graph.edges(); each matrix is m*m
  // row-major in the (min,max) orientation.
  GraphicalModel(Graph graph, int label_count,
                 std::vector<std::vector<double>> node_costs,
                 std::vector<std::vector<double>> edge_costs);

  // All edges share one m*m cost matrix (large grids; avoids materialising
  // a matrix per edge).
  static GraphicalModel with_shared_edge_cost(
      Graph graph, int label_count,
      std::vector<std::vector<double>> node_costs,
      std::vector<double> shared_edge_cost);

  const Graph& graph() const { return graph_; }
  int node_count() const { return graph_.node_count(); }
  int label_count() const { return m_; }
  bool has_shared_edge_cost() const { return !shared_h_.empty(); }

  double node_cost(int i, int a) const { return g_[i][a]; }  // g_i(a)
  std::span<const double> node_costs(int i) const { return g_[i]; }

  // h_ij(a,b); direction aware, i and j must be adjacent.
  double edge_cost(int i, int j, int a, int b) const {
    const double* h = edge_matrix(graph_.edge_index(i, j));
    return i < j ? h[a * m_ + b] : h[b * m_ + a];
  }
  // h for undirected edge id e in the (min,max) orientation.
  double edge_cost_by_index(int e, int a, int b) const {
    return edge_matrix(e)[a * m_ + b];
  }

  double node_potential(int i, int a) const;               // exp(-g)
  double edge_potential(int i, int j, int a, int b) const;  // exp(-h)

 private:
  const double* edge_matrix(int e) const {
    return has_shared_edge_cost() ? shared_h_.data() : h_[e].data();
  }
  void validate() const;

  Graph graph_;
  int m_ = 0;
  std::vector<std::vector<double>> g_;
  std::vector<std::vector<double>> h_;  // empty when shared_h_ is used
  std::vector<double> shared_h_;
};

// Label a of a binary model read as a spin: 0 -> -1, 1 -> +1.
inline int spin_value(int label) { return label == 0 ? -1 : 1; }

// Spin-glass instance: field y_i in {-1,+1} per node, coupling per
// undirected edge.  Energy of a spin assignment s is
//   sum_i s_i y_i + sum_{ij} coupling_ij s_i s_j.
struct SpinGlassInstance {
  Graph graph;
  std::vector<int> field;          // per node, each -1 or +1
  std::vector<double> coupling;    // per undirected edge id
  std::uint64_t seed = 0;
};

enum class CouplingLaw {
  uniform,  // Unif(-scale, scale)
  normal,   // scale * N(0,1)
};

// Graph ~ G(n, edge_prob); fields are fair coin flips, couplings follow the
// given law.  Fully determined by the seed.
SpinGlassInstance random_spin_glass(int n, double edge_prob, CouplingLaw law,
                                    double scale, std::uint64_t seed);

// Binary model with g_i(a) = s(a) * y_i and h_ij(a,b) = coupling * s(a)s(b).
GraphicalModel spin_glass_model(const SpinGlassInstance& instance);

// One weight per directed edge, indexed by directed index of k->i:
// w_{ki} = 1/(d(i)-1), where d(i) is the degree of the receiving node i.
// In-edges of degree-1 nodes get the sentinel 1 (such a weight is never
// read: the only outgoing message of i excludes its only in-edge).
std::vector<double> uniform_weights(const Graph& graph);

}  // namespace ccbp

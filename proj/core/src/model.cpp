#include "ccbp/model.hpp"

#include <cmath>
#include <stdexcept>

#include "ccbp/rng.hpp"

namespace ccbp {

GraphicalModel::GraphicalModel(Graph graph, int label_count,
                               std::vector<std::vector<double>> node_costs,
                               std::vector<std::vector<double>> edge_costs)
    : graph_(std::move(graph)),
      m_(label_count),
      g_(std::move(node_costs)),
      h_(std::move(edge_costs)) {
  if (static_cast<int>(h_.size()) != graph_.edge_count())
    throw std::invalid_argument("model: edge cost count != edge count");
  for (const auto& h : h_)
    if (static_cast<int>(h.size()) != m_ * m_)
      throw std::invalid_argument("model: edge cost matrix is not m*m");
  validate();
}

GraphicalModel GraphicalModel::with_shared_edge_cost(
    Graph graph, int label_count, std::vector<std::vector<double>> node_costs,
    std::vector<double> shared_edge_cost) {
  GraphicalModel model;
  model.graph_ = std::move(graph);
  model.m_ = label_count;
  model.g_ = std::move(node_costs);
  model.shared_h_ = std::move(shared_edge_cost);
  if (static_cast<int>(model.shared_h_.size()) !=
      model.m_ * model.m_)
    throw std::invalid_argument("model: shared edge cost matrix is not m*m");
  model.validate();
  return model;
}

void GraphicalModel::validate() const {
  if (m_ < 1) throw std::invalid_argument("model: label count must be >= 1");
  if (static_cast<int>(g_.size()) != graph_.node_count())
    throw std::invalid_argument("model: node cost count != node count");
  for (const auto& g : g_) {
    if (static_cast<int>(g.size()) != m_)
      throw std::invalid_argument("model: node cost vector is not length m");
    for (double v : g)
      if (!std::isfinite(v))
        throw std::invalid_argument("model: non-finite node cost");
  }
  for (const auto& h : h_)
    for (double v : h)
      if (!std::isfinite(v))
        throw std::invalid_argument("model: non-finite edge cost");
  for (double v : shared_h_)
    if (!std::isfinite(v))
      throw std::invalid_argument("model: non-finite edge cost");
}

double GraphicalModel::node_potential(int i, int a) const {
  return std::exp(-g_[i][a]);
}

double GraphicalModel::edge_potential(int i, int j, int a, int b) const {
  return std::exp(-edge_cost(i, j, a, b));
}

SpinGlassInstance random_spin_glass(int n, double edge_prob, CouplingLaw law,
                                    double scale, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_spin_glass: n must be >= 1");
  if (scale < 0)
    throw std::invalid_argument("random_spin_glass: negative scale");
  SpinGlassInstance inst;
  inst.seed = seed;
  inst.graph = random_graph(n, edge_prob, mix_seed(seed, 0));
  Rng rng(mix_seed(seed, 1));
  inst.field.resize(n);
  for (int i = 0; i < n; ++i) inst.field[i] = rng.bernoulli(0.5) ? 1 : -1;
  inst.coupling.resize(inst.graph.edge_count());
  for (double& c : inst.coupling)
    c = law == CouplingLaw::uniform ? rng.uniform(-scale, scale)
                                    : scale * rng.normal();
  return inst;
}

GraphicalModel spin_glass_model(const SpinGlassInstance& instance) {
  const Graph& graph = instance.graph;
  const int n = graph.node_count();
  if (static_cast<int>(instance.field.size()) != n ||
      static_cast<int>(instance.coupling.size()) != graph.edge_count())
    throw std::invalid_argument("spin_glass_model: size mismatch");
  std::vector<std::vector<double>> g(n);
  for (int i = 0; i < n; ++i) {
    const double y = instance.field[i];
    g[i] = {spin_value(0) * y, spin_value(1) * y};
  }
  std::vector<std::vector<double>> h(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double c = instance.coupling[e];
    h[e] = {c, -c, -c, c};  // c * s(a)s(b), row-major over (a,b)
  }
  return GraphicalModel(graph, 2, std::move(g), std::move(h));
}

std::vector<double> uniform_weights(const Graph& graph) {
  std::vector<double> w(graph.directed_count(), 1.0);
  for (int d = 0; d < graph.directed_count(); ++d) {
    const int receiver = graph.directed_pair(d).second;
    if (graph.degree(receiver) > 1) w[d] = 1.0 / (graph.degree(receiver) - 1);
  }
  return w;
}

}  // namespace ccbp

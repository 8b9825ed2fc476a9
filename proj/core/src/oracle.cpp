#include "ccbp/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccbp {

double energy(const GraphicalModel& model, std::span<const int> labelling) {
  const Graph& graph = model.graph();
  if (static_cast<int>(labelling.size()) != graph.node_count())
    throw std::invalid_argument("energy: labelling size mismatch");
  for (int i = 0; i < graph.node_count(); ++i)
    if (labelling[i] < 0 || labelling[i] >= model.label_count())
      throw std::invalid_argument("energy: label out of range");
  double e = 0;
  for (int i = 0; i < graph.node_count(); ++i)
    e += model.node_cost(i, labelling[i]);
  for (int k = 0; k < graph.edge_count(); ++k) {
    auto [i, j] = graph.edges()[k];
    e += model.edge_cost_by_index(k, labelling[i], labelling[j]);
  }
  return e;
}

ExactResult brute_marginals(const GraphicalModel& model, long long budget) {
  const int n = model.node_count();
  const int m = model.label_count();
  ExactResult r;
  r.per_node.assign(n, std::vector<double>(m, 0.0));
  double best = -1.0;
  for_each_labelling(n, m, budget, [&](const std::vector<int>& x) {
    const double p = std::exp(-energy(model, x));
    r.partition += p;
    for (int i = 0; i < n; ++i) r.per_node[i][x[i]] += p;
    if (p > best) {  // strict: keeps the lexicographically first maximiser
      best = p;
      r.map_labelling = x;
    }
  });
  if (!(r.partition > 0) || !std::isfinite(r.partition))
    throw std::runtime_error("brute_marginals: degenerate partition function");
  for (auto& row : r.per_node)
    for (double& v : row) v /= r.partition;
  r.map_value = best;
  return r;
}

ExactResult brute_max_marginals(const GraphicalModel& model,
                                long long budget) {
  const int n = model.node_count();
  const int m = model.label_count();
  ExactResult r;
  r.per_node.assign(n, std::vector<double>(m, 0.0));
  double best = -1.0;
  for_each_labelling(n, m, budget, [&](const std::vector<int>& x) {
    const double p = std::exp(-energy(model, x));
    for (int i = 0; i < n; ++i)
      r.per_node[i][x[i]] = std::max(r.per_node[i][x[i]], p);
    if (p > best) {
      best = p;
      r.map_labelling = x;
    }
  });
  r.map_value = best;
  return r;
}

ExactResult brute_min_marginals(const GraphicalModel& model,
                                long long budget) {
  const int n = model.node_count();
  const int m = model.label_count();
  ExactResult r;
  r.per_node.assign(
      n, std::vector<double>(m, std::numeric_limits<double>::infinity()));
  double best = std::numeric_limits<double>::infinity();
  for_each_labelling(n, m, budget, [&](const std::vector<int>& x) {
    const double e = energy(model, x);
    for (int i = 0; i < n; ++i)
      r.per_node[i][x[i]] = std::min(r.per_node[i][x[i]], e);
    if (e < best) {
      best = e;
      r.map_labelling = x;
    }
  });
  r.map_value = best;
  return r;
}

ExactResult brute_map(const GraphicalModel& model, long long budget) {
  const int n = model.node_count();
  const int m = model.label_count();
  ExactResult r;
  double best = std::numeric_limits<double>::infinity();
  for_each_labelling(n, m, budget, [&](const std::vector<int>& x) {
    const double e = energy(model, x);
    if (e < best) {
      best = e;
      r.map_labelling = x;
    }
  });
  r.map_value = best;
  return r;
}

}  // namespace ccbp

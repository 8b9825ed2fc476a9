#include "ccbp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccbp {

namespace {

// Shared scaffolding: for every directed edge (i -> j) an update computes a
// per-source-label accumulator from the incoming messages of i (excluding
// the one from j), then reduces over x_i for each x_j.  Neighbors and labels
// are always visited in ascending order, so results are bit-reproducible.

enum class Reduce { max, sum, min };

double reduce_init(Reduce r) {
  switch (r) {
    case Reduce::max: return -std::numeric_limits<double>::infinity();
    case Reduce::sum: return 0.0;
    case Reduce::min: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

void reduce_in(Reduce r, double& acc, double v) {
  switch (r) {
    case Reduce::max: acc = std::max(acc, v); break;
    case Reduce::sum: acc += v; break;
    case Reduce::min: acc = std::min(acc, v); break;
  }
}

MessageVector bp_raw_step(const GraphicalModel& model, const MessageVector& mu,
                          Reduce reduce) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("bp step: message shape mismatch");
  if (mu.domain() != Domain::probability)
    throw std::invalid_argument("bp step: requires probability domain");

  MessageVector out(graph.directed_count(), m, Domain::probability, 1.0);
  std::vector<double> in_prod(m), pot(m);
  for (int i = 0; i < graph.node_count(); ++i) {
    for (int a = 0; a < m; ++a) pot[a] = model.node_potential(i, a);
    for (int j : graph.neighbors(i)) {
      for (int a = 0; a < m; ++a) {
        double p = pot[a];
        for (int k : graph.neighbors(i))
          if (k != j) p *= mu.at(graph.directed_index(k, i))[a];
        in_prod[a] = p;
      }
      auto dst = out.at(graph.directed_index(i, j));
      for (int b = 0; b < m; ++b) {
        double acc = reduce_init(reduce);
        for (int a = 0; a < m; ++a)
          reduce_in(reduce, acc, in_prod[a] * model.edge_potential(i, j, a, b));
        dst[b] = acc;
      }
    }
  }
  return out;
}

MessageVector ccbp_prob_step(const GraphicalModel& model,
                             const OperatorConfig& cfg,
                             const MessageVector& mu, Reduce reduce) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  cfg.validate(graph);
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("ccbp step: message shape mismatch");
  if (mu.domain() != Domain::probability)
    throw std::invalid_argument("ccbp step: requires probability domain");

  MessageVector out(graph.directed_count(), m, Domain::probability, 1.0);
  std::vector<double> in_fac(m), pot(m);
  for (int i = 0; i < graph.node_count(); ++i) {
    for (int a = 0; a < m; ++a) pot[a] = model.node_potential(i, a);
    for (int j : graph.neighbors(i)) {
      for (int a = 0; a < m; ++a) {
        // (prod_k mu_ki^{w_ki})^gamma, accumulated in log space.
        double lw = 0;
        for (int k : graph.neighbors(i))
          if (k != j) {
            const int d = graph.directed_index(k, i);
            lw += cfg.weights[d] * std::log(mu.at(d)[a]);
          }
        in_fac[a] = pot[a] * std::exp(cfg.gamma * lw);
      }
      auto dst = out.at(graph.directed_index(i, j));
      for (int b = 0; b < m; ++b) {
        double acc = reduce_init(reduce);
        for (int a = 0; a < m; ++a)
          reduce_in(reduce, acc, in_fac[a] * model.edge_potential(i, j, a, b));
        dst[b] = acc;
      }
    }
  }
  return out;
}

}  // namespace

void OperatorConfig::validate(const Graph& graph) const {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("config: gamma must lie in [0,1)");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("config: alpha must lie in [0,1)");
  if (algorithm == Algorithm::bp) return;
  if (static_cast<int>(weights.size()) != graph.directed_count())
    throw std::invalid_argument("config: one weight per directed edge");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("config: weights must be nonnegative");
  constexpr double kTol = 1.0 + 1e-9;
  for (int i = 0; i < graph.node_count(); ++i)
    for (int j : graph.neighbors(i)) {
      double sum = 0;
      for (int k : graph.neighbors(i))
        if (k != j) sum += weights[graph.directed_index(k, i)];
      if (sum > kTol)
        throw std::invalid_argument(
            "config: incoming weights of a node must sum to at most 1");
    }
}

MessageVector bp_raw_step_max(const GraphicalModel& model,
                              const MessageVector& mu) {
  return bp_raw_step(model, mu, Reduce::max);
}

MessageVector bp_raw_step_sum(const GraphicalModel& model,
                              const MessageVector& mu) {
  return bp_raw_step(model, mu, Reduce::sum);
}

MessageVector bp_step_max(const GraphicalModel& model,
                          const MessageVector& mu) {
  return normalize(bp_raw_step(model, mu, Reduce::max));
}

MessageVector bp_step_sum(const GraphicalModel& model,
                          const MessageVector& mu) {
  return normalize(bp_raw_step(model, mu, Reduce::sum));
}

MessageVector bp_step_minsum(const GraphicalModel& model,
                             const MessageVector& mu) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("bp step: message shape mismatch");
  if (mu.domain() != Domain::neg_log)
    throw std::invalid_argument("bp_step_minsum: requires neg_log domain");

  MessageVector out(graph.directed_count(), m, Domain::neg_log, 0.0);
  std::vector<double> in_sum(m);
  for (int i = 0; i < graph.node_count(); ++i) {
    for (int j : graph.neighbors(i)) {
      for (int a = 0; a < m; ++a) {
        double s = model.node_cost(i, a);
        for (int k : graph.neighbors(i))
          if (k != j) s += mu.at(graph.directed_index(k, i))[a];
        in_sum[a] = s;
      }
      auto dst = out.at(graph.directed_index(i, j));
      for (int b = 0; b < m; ++b) {
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < m; ++a)
          best = std::min(best, in_sum[a] + model.edge_cost(i, j, a, b));
        dst[b] = best;
      }
      // Neg-log image of sum-to-one normalisation:
      //   v'(x) = v(x) + log sum_t exp(-v(t)), evaluated stably.
      double lo = dst[0];
      for (int b = 1; b < m; ++b) lo = std::min(lo, dst[b]);
      double z = 0;
      for (int b = 0; b < m; ++b) z += std::exp(lo - dst[b]);
      const double shift = std::log(z) - lo;
      for (int b = 0; b < m; ++b) dst[b] += shift;
    }
  }
  return out;
}

MessageVector ccbp_step_max(const GraphicalModel& model,
                            const OperatorConfig& cfg,
                            const MessageVector& mu) {
  return ccbp_prob_step(model, cfg, mu, Reduce::max);
}

MessageVector ccbp_step_sum(const GraphicalModel& model,
                            const OperatorConfig& cfg,
                            const MessageVector& mu) {
  return ccbp_prob_step(model, cfg, mu, Reduce::sum);
}

MessageVector ccbp_step_minsum(const GraphicalModel& model,
                               const OperatorConfig& cfg,
                               const MessageVector& mu) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  cfg.validate(graph);
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("ccbp step: message shape mismatch");
  if (mu.domain() != Domain::neg_log)
    throw std::invalid_argument("ccbp_step_minsum: requires neg_log domain");

  MessageVector out(graph.directed_count(), m, Domain::neg_log, 0.0);
  std::vector<double> base(m);
  for (int i = 0; i < graph.node_count(); ++i) {
    for (int j : graph.neighbors(i)) {
      for (int a = 0; a < m; ++a) {
        double s = 0;
        for (int k : graph.neighbors(i))
          if (k != j) {
            const int d = graph.directed_index(k, i);
            s += cfg.weights[d] * mu.at(d)[a];
          }
        base[a] = model.node_cost(i, a) + cfg.gamma * s;
      }
      auto dst = out.at(graph.directed_index(i, j));
      for (int b = 0; b < m; ++b) {
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < m; ++a)
          best = std::min(best, base[a] + model.edge_cost(i, j, a, b));
        dst[b] = best;
      }
    }
  }
  return out;
}

MessageVector damped_step(const StepFn& base, const MessageVector& mu,
                          double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("damped_step: alpha must lie in [0,1)");
  MessageVector next = base(mu);
  if (alpha == 0.0) return next;
  if (!next.same_shape(mu) || next.domain() != mu.domain())
    throw std::invalid_argument("damped_step: step changed message shape");
  auto dst = next.flat();
  auto old = mu.flat();
  for (std::size_t k = 0; k < dst.size(); ++k)
    dst[k] = (1.0 - alpha) * dst[k] + alpha * old[k];
  return next;
}

StepFn damped(StepFn base, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("damped: alpha must lie in [0,1)");
  return [base = std::move(base), alpha](const MessageVector& mu) {
    return damped_step(base, mu, alpha);
  };
}

Domain step_domain(const OperatorConfig& cfg) {
  return cfg.semiring == Semiring::min_sum ? Domain::neg_log
                                           : Domain::probability;
}

StepFn make_step(const GraphicalModel& model, const OperatorConfig& cfg) {
  cfg.validate(model.graph());
  if (cfg.algorithm == Algorithm::bp) {
    StepFn base;
    switch (cfg.semiring) {
      case Semiring::sum_product:
        base = [&model](const MessageVector& mu) {
          return bp_step_sum(model, mu);
        };
        break;
      case Semiring::max_product:
        base = [&model](const MessageVector& mu) {
          return bp_step_max(model, mu);
        };
        break;
      case Semiring::min_sum:
        base = [&model](const MessageVector& mu) {
          return bp_step_minsum(model, mu);
        };
        break;
    }
    return damped(std::move(base), cfg.alpha);
  }
  switch (cfg.semiring) {
    case Semiring::sum_product:
      return [&model, cfg](const MessageVector& mu) {
        return ccbp_step_sum(model, cfg, mu);
      };
    case Semiring::max_product:
      return [&model, cfg](const MessageVector& mu) {
        return ccbp_step_max(model, cfg, mu);
      };
    case Semiring::min_sum:
    default:
      return [&model, cfg](const MessageVector& mu) {
        return ccbp_step_minsum(model, cfg, mu);
      };
  }
}

std::pair<MessageVector, FixedPointReport> run_fixed_point(const StepFn& step,
                                                           MessageVector mu0,
                                                           double epsilon,
                                                           int max_iter) {
  if (!(epsilon > 0))
    throw std::invalid_argument("run_fixed_point: epsilon must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("run_fixed_point: max_iter must be >= 1");
  FixedPointReport report;
  MessageVector mu = std::move(mu0);
  for (int t = 1; t <= max_iter; ++t) {
    MessageVector next = step(mu);
    const double r = metric_d(next, mu);
    report.residual_history.push_back(r);
    report.iterations = t;
    report.final_residual = r;
    mu = std::move(next);
    if (r < epsilon) {
      report.converged = true;
      break;
    }
  }
  return {std::move(mu), std::move(report)};
}

Beliefs beliefs_prob(const GraphicalModel& model, const MessageVector& mu) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  if (mu.domain() != Domain::probability)
    throw std::invalid_argument("beliefs_prob: requires probability domain");
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("beliefs_prob: message shape mismatch");
  Beliefs b;
  b.domain = Domain::probability;
  b.values.resize(graph.node_count());
  for (int j = 0; j < graph.node_count(); ++j) {
    auto& v = b.values[j];
    v.resize(m);
    for (int a = 0; a < m; ++a) {
      double p = model.node_potential(j, a);
      for (int i : graph.neighbors(j)) p *= mu.at(graph.directed_index(i, j))[a];
      v[a] = p;
    }
  }
  return b;
}

Beliefs beliefs_minsum(const GraphicalModel& model, const MessageVector& mu) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  if (mu.domain() != Domain::neg_log)
    throw std::invalid_argument("beliefs_minsum: requires neg_log domain");
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("beliefs_minsum: message shape mismatch");
  Beliefs b;
  b.domain = Domain::neg_log;
  b.values.resize(graph.node_count());
  for (int j = 0; j < graph.node_count(); ++j) {
    auto& v = b.values[j];
    v.resize(m);
    for (int a = 0; a < m; ++a) {
      double s = model.node_cost(j, a);
      for (int i : graph.neighbors(j)) s += mu.at(graph.directed_index(i, j))[a];
      v[a] = s;
    }
  }
  return b;
}

Beliefs normalized(const Beliefs& b) {
  if (b.domain != Domain::probability)
    throw std::invalid_argument("normalized: requires probability domain");
  Beliefs out = b;
  for (auto& v : out.values) {
    double sum = 0;
    for (double x : v) sum += x;
    if (!(sum > 0) || !std::isfinite(sum))
      throw std::invalid_argument("normalized: belief sum not positive");
    for (double& x : v) x /= sum;
  }
  return out;
}

std::vector<int> decode(const Beliefs& b) {
  std::vector<int> labels(b.values.size(), 0);
  for (std::size_t j = 0; j < b.values.size(); ++j) {
    const auto& v = b.values[j];
    int best = 0;
    for (int a = 1; a < static_cast<int>(v.size()); ++a) {
      const bool better = b.domain == Domain::probability ? v[a] > v[best]
                                                          : v[a] < v[best];
      if (better) best = a;
    }
    labels[j] = best;
  }
  return labels;
}

}  // namespace ccbp

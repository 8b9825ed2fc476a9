#pragma once

// Message-passing operators.
//
// Classic belief propagation (bp_step_*) recomputes every directed message
//   (T mu)_ij(x_j) = N[ opt_{x_i} phi_i(x_i) psi_ij(x_i,x_j)
//                         prod_{k in N(i)\j} mu_ki(x_i) ]
// where opt is max or sum and N rescales each message to sum 1.
//
// The convex-combination variant (ccbp_step_*) raises each incoming message
// to a weight w_ki with sum_{k in N(i)\j} w_ki <= 1 and discounts the whole
// product by an exponent gamma in [0,1):
//   (S mu)_ij(x_j) = opt_{x_i} phi_i psi_ij (prod_k mu_ki^{w_ki})^gamma
// S is a gamma-contraction in the log-max metric, so iterating it converges
// geometrically to a unique fixed point from any start.  No normalisation is
// applied.  The min-sum form is the same operator written in neg-log values:
//   (S mu)_ij(x_j) = min_{x_i} [ g_i + h_ij + gamma sum_k w_ki mu_ki(x_i) ].

#include <functional>
#include <utility>
#include <vector>

#include "ccbp/messages.hpp"
#include "ccbp/model.hpp"

namespace ccbp {

enum class Semiring { sum_product, max_product, min_sum };
enum class Algorithm { bp, ccbp };

struct OperatorConfig {
  Algorithm algorithm = Algorithm::ccbp;
  Semiring semiring = Semiring::sum_product;
  std::vector<double> weights;  // per directed index of k->i; ccbp only
  double gamma = 0.9;           // ccbp discount, [0,1)
  double alpha = 0.0;           // bp damping, [0,1)

  // Checks ranges and, for ccbp, that weights are nonnegative and that
  // sum_{k in N(i)\j} w_ki <= 1 for every directed edge (i,j), with a
  // relative tolerance of 1e-9 on the sum.
  void validate(const Graph& graph) const;
};

// Raw (unnormalised) bp updates; bp_step_* below normalise per message.
MessageVector bp_raw_step_max(const GraphicalModel&, const MessageVector&);
MessageVector bp_raw_step_sum(const GraphicalModel&, const MessageVector&);

MessageVector bp_step_max(const GraphicalModel&, const MessageVector&);
MessageVector bp_step_sum(const GraphicalModel&, const MessageVector&);
// Neg-log image of bp_step_max (normalisation included, via log-sum-exp).
MessageVector bp_step_minsum(const GraphicalModel&, const MessageVector&);

MessageVector ccbp_step_max(const GraphicalModel&, const OperatorConfig&,
                            const MessageVector&);
MessageVector ccbp_step_sum(const GraphicalModel&, const OperatorConfig&,
                            const MessageVector&);
MessageVector ccbp_step_minsum(const GraphicalModel&, const OperatorConfig&,
                               const MessageVector&);

using StepFn = std::function<MessageVector(const MessageVector&)>;

// (1-alpha) * base(mu) + alpha * mu, entrywise in the step's own domain.
MessageVector damped_step(const StepFn& base, const MessageVector& mu,
                          double alpha);
StepFn damped(StepFn base, double alpha);

// Full update for a config: bp gets damping applied after normalisation;
// ccbp steps are used as-is (they need no damping to converge).
StepFn make_step(const GraphicalModel&, const OperatorConfig&);

// Domain a config's step operates in (probability, except min_sum).
Domain step_domain(const OperatorConfig&);

// Iterates mu <- step(mu) until d(new, old) < epsilon or max_iter steps.
std::pair<MessageVector, FixedPointReport> run_fixed_point(
    const StepFn& step, MessageVector mu0, double epsilon, int max_iter);

struct Beliefs {
  Domain domain = Domain::probability;
  std::vector<std::vector<double>> values;  // per node, length m
};

// b_j(x_j) = phi_j(x_j) * prod_{i in N(j)} mu_ij(x_j)   (probability)
Beliefs beliefs_prob(const GraphicalModel&, const MessageVector&);
// b_j(x_j) = g_j(x_j) + sum_{i in N(j)} mu_ij(x_j)      (neg_log)
Beliefs beliefs_minsum(const GraphicalModel&, const MessageVector&);

// Per-node sum-to-one rescaling (probability domain only).
Beliefs normalized(const Beliefs&);

// argmax (probability) / argmin (neg_log) per node; ties break to the
// lowest label index.
std::vector<int> decode(const Beliefs&);

}  // namespace ccbp

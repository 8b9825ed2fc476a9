// Microbenchmarks for the message passing hot paths:
//   - one parallel update of all messages, per semiring and graph family
//   - full fixed point solves on spin glass instances
//   - the truncated-quadratic message kernel (linear envelope vs quadratic
//     reference) at image-sized label counts
//   - one update of the image grid specialization
#include <benchmark/benchmark.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "ccbp/graph.hpp"
#include "ccbp/image.hpp"
#include "ccbp/messages.hpp"
#include "ccbp/model.hpp"
#include "ccbp/operators.hpp"
#include "ccbp/rng.hpp"

namespace {

using namespace ccbp;

GraphicalModel spin_glass(int n, double p, std::uint64_t seed) {
  return spin_glass_model(
      random_spin_glass(n, p, CouplingLaw::normal, 1.0, seed));
}

OperatorConfig convex_config(const Graph& g, Semiring semiring, double gamma) {
  OperatorConfig cfg;
  cfg.algorithm = Algorithm::ccbp;
  cfg.semiring = semiring;
  cfg.gamma = gamma;
  cfg.weights = uniform_weights(g);
  return cfg;
}

Domain domain_for(Semiring semiring) {
  return semiring == Semiring::min_sum ? Domain::neg_log
                                       : Domain::probability;
}

// One application of the convex-combination operator on a dense-ish spin
// glass; the range argument is the node count.
void BM_ConvexStep(benchmark::State& state, Semiring semiring) {
  const int n = static_cast<int>(state.range(0));
  const GraphicalModel model = spin_glass(n, 0.5, 99);
  const StepFn step =
      make_step(model, convex_config(model.graph(), semiring, 0.9));
  MessageVector mu = init_messages(model, domain_for(semiring));
  for (auto _ : state) {
    mu = step(mu);
    benchmark::DoNotOptimize(mu);
  }
  state.SetItemsProcessed(state.iterations() *
                          model.graph().directed_count());
}

void BM_ConvexStepSum(benchmark::State& state) {
  BM_ConvexStep(state, Semiring::sum_product);
}
void BM_ConvexStepMinSum(benchmark::State& state) {
  BM_ConvexStep(state, Semiring::min_sum);
}

// One application of damped belief propagation for comparison.
void BM_DampedStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GraphicalModel model = spin_glass(n, 0.5, 99);
  OperatorConfig cfg;
  cfg.algorithm = Algorithm::bp;
  cfg.semiring = Semiring::sum_product;
  cfg.alpha = 0.9;
  const StepFn step = make_step(model, cfg);
  MessageVector mu = init_messages(model, Domain::probability);
  for (auto _ : state) {
    mu = step(mu);
    benchmark::DoNotOptimize(mu);
  }
  state.SetItemsProcessed(state.iterations() *
                          model.graph().directed_count());
}

// Full solve: iterate the convex-combination operator to a 1e-8 fixed point.
void BM_ConvexSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GraphicalModel model = spin_glass(n, 0.5, 7);
  const StepFn step = make_step(
      model, convex_config(model.graph(), Semiring::sum_product, 0.9));
  for (auto _ : state) {
    auto result = run_fixed_point(
        step, init_messages(model, Domain::probability), 1e-8, 10000);
    benchmark::DoNotOptimize(result);
  }
}

// The two implementations of the truncated-quadratic min-sum message at
// image-sized label counts: the linear-time envelope and the quadratic scan.
void BM_MessageKernel(benchmark::State& state, bool fast) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(42);
  std::vector<double> g_row(m), in_sum(m);
  for (int a = 0; a < m; ++a) {
    g_row[a] = rng.uniform(0.0, 1e4);
    in_sum[a] = rng.uniform(0.0, 50.0);
  }
  for (auto _ : state) {
    auto out = fast ? minsum_message_fast(g_row, in_sum, 3.0, 100.0)
                    : minsum_message_naive(g_row, in_sum, 3.0, 100.0);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * m);
}

void BM_MessageEnvelope(benchmark::State& state) {
  BM_MessageKernel(state, true);
}
void BM_MessageQuadratic(benchmark::State& state) {
  BM_MessageKernel(state, false);
}

// One parallel update of every message on a square restoration grid with
// 256 labels per pixel.
void BM_ImageStep(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Image img;
  img.width = side;
  img.height = side;
  img.channels = 1;
  img.planes.assign(1, std::vector<std::uint8_t>(
                           static_cast<std::size_t>(side) * side, 0));
  Rng rng(11);
  for (auto& px : img.planes[0])
    px = static_cast<std::uint8_t>(rng.below(256));
  RestoreParams params;
  const GraphicalModel model =
      build_image_model(img.planes[0], img.width, img.height, params);
  const std::vector<double> weights = uniform_weights(model.graph());
  MessageVector mu = init_messages(model, Domain::neg_log);
  for (auto _ : state) {
    mu = image_step(model, weights, params, mu);
    benchmark::DoNotOptimize(mu);
  }
  state.SetItemsProcessed(state.iterations() *
                          model.graph().directed_count());
}

BENCHMARK(BM_ConvexStepSum)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_ConvexStepMinSum)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_DampedStep)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_ConvexSolve)->Arg(16)->Arg(64);
BENCHMARK(BM_MessageEnvelope)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_MessageQuadratic)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_ImageStep)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();

#pragma once

// Spin-glass experiment harness: random-instance sweeps that compare damped
// belief propagation against the convex-combination variant on small graphs
// where brute-force ground truth is available, plus a complete-graph study
// of oscillation versus guaranteed convergence.  All runs are reproducible:
// per-instance streams derive from (base_seed, point index, instance index).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccbp/operators.hpp"

namespace ccbp {

struct SweepRow {
  double parameter = 0.0;      // sigma, edge probability, or gamma
  std::string algorithm;       // "bp" | "ccbp"
  double convergence_rate = 0.0;
  double mean_iterations = 0.0;  // over converged instances; NaN if none
  double mean_mse = 0.0;         // over all instances
  int instance_count = 0;
  std::uint64_t seed = 0;
};

struct SweepTable {
  std::string experiment;  // "sigma" | "edges" | "gamma"
  std::uint64_t base_seed = 0;
  double epsilon = 1e-2;
  int max_iterations = 1000;
  double alpha = 0.9;   // bp damping
  double gamma = 0.9;   // ccbp discount (fixed sweeps; varies in "gamma")
  std::vector<SweepRow> rows;  // sorted by (algorithm, parameter)
};

// (1/n) sum_i sum_t |a_i(t) - b_i(t)|^2
double mse(const std::vector<std::vector<double>>& a,
           const std::vector<std::vector<double>>& b);

// Subtracts each node's mean over labels; used to compare belief vectors
// that are only meaningful up to a per-node additive constant.
std::vector<std::vector<double>> mean_zero(
    const std::vector<std::vector<double>>& values);

// Coupling strength sweep: sigma in {0, 0.5, ..., 5}, instances with
// n=10, edge prob 0.5, couplings ~ Unif(-sigma, sigma).  Damped
// sum-product bp (alpha=0.9) vs sum-product ccbp (gamma=0.9, uniform
// weights), epsilon 1e-2, at most 1000 iterations, all-ones start;
// MSE is measured against brute-force marginals.
SweepTable sweep_sigma(std::uint64_t base_seed, int instances_per_point = 100);

// Edge probability sweep: p in {0, 0.1, ..., 1}, couplings ~ Unif(-5, 5);
// otherwise as sweep_sigma.
SweepTable sweep_edge_prob(std::uint64_t base_seed,
                           int instances_per_point = 100);

// Discount sweep on one fixed instance (n=10, p=0.5, couplings standard
// normal): max-product ccbp for gamma in {0, 0.1, ..., 0.9}; MSE against
// normalized brute-force max-marginals.
SweepTable sweep_gamma(std::uint64_t base_seed);

struct OscillationSeedResult {
  std::uint64_t seed = 0;
  bool bp_converged = false;
  int bp_iterations = 0;
  // max over nodes and labels of (max - min) of the bp belief entry across
  // the final (up to) 100 iterations; large values indicate oscillation.
  double bp_oscillation_range = 0.0;
  bool ccbp_converged = false;
  int ccbp_iterations = 0;
  int agreement_count = 0;  // nodes where ccbp decode == exact argmin
  std::vector<std::vector<double>> ccbp_beliefs_shifted;       // mean-zero
  std::vector<std::vector<double>> exact_min_marginals_shifted;
};

struct OscillationReport {
  std::uint64_t base_seed = 0;
  int node_count = 12;
  std::vector<OscillationSeedResult> seeds;
};

// Complete graph on 12 nodes, couplings standard normal: min-sum damped bp
// (alpha=0.9) vs min-sum ccbp (gamma=0.9, uniform weights), zeros start,
// epsilon 1e-2, at most 1000 iterations, compared to brute-force
// min-marginals.
OscillationReport oscillation_study(std::uint64_t base_seed,
                                    int seed_count = 20);

// CSV with header parameter,algorithm,convergence_rate,mean_iterations,
// mean_mse,instances,seed; reals use 6 significant digits.
std::string to_csv(const SweepTable& table);
void write_csv(const SweepTable& table, std::ostream& out);
void write_csv(const SweepTable& table, const std::string& path);

}  // namespace ccbp

#include "ccbp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ccbp/oracle.hpp"
#include "ccbp/rng.hpp"

namespace ccbp {

namespace {

constexpr double kEpsilon = 1e-2;
constexpr int kMaxIterations = 1000;
constexpr double kAlpha = 0.9;
constexpr double kGamma = 0.9;

struct InstanceOutcome {
  bool converged = false;
  int iterations = 0;
  double mse_value = 0.0;
};

InstanceOutcome run_sum_product(const GraphicalModel& model,
                                const OperatorConfig& cfg,
                                const ExactResult& exact) {
  auto [mu, report] = run_fixed_point(make_step(model, cfg),
                                      init_messages(model, Domain::probability),
                                      kEpsilon, kMaxIterations);
  InstanceOutcome out;
  out.converged = report.converged;
  out.iterations = report.iterations;
  out.mse_value = mse(normalized(beliefs_prob(model, mu)).values,
                      exact.per_node);
  return out;
}

SweepRow aggregate(double parameter, std::string algorithm,
                   const std::vector<InstanceOutcome>& outcomes,
                   std::uint64_t seed) {
  SweepRow row;
  row.parameter = parameter;
  row.algorithm = std::move(algorithm);
  row.instance_count = static_cast<int>(outcomes.size());
  row.seed = seed;
  int converged = 0;
  long long iter_sum = 0;
  double mse_sum = 0;
  for (const auto& o : outcomes) {
    if (o.converged) {
      ++converged;
      iter_sum += o.iterations;
    }
    mse_sum += o.mse_value;
  }
  row.convergence_rate =
      outcomes.empty() ? 0.0 : static_cast<double>(converged) / outcomes.size();
  row.mean_iterations =
      converged > 0 ? static_cast<double>(iter_sum) / converged
                    : std::numeric_limits<double>::quiet_NaN();
  row.mean_mse = outcomes.empty() ? 0.0 : mse_sum / outcomes.size();
  return row;
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.algorithm != b.algorithm)
                       return a.algorithm < b.algorithm;
                     return a.parameter < b.parameter;
                   });
}

// Shared body of the sigma and edge-probability sweeps: at each parameter
// value, generate instances once and run both algorithms on each.
SweepTable pairwise_sweep(std::string experiment, std::uint64_t base_seed,
                          int instances_per_point,
                          const std::vector<double>& parameters,
                          double fixed_edge_prob, bool parameter_is_sigma) {
  if (instances_per_point < 1)
    throw std::invalid_argument("sweep: instances_per_point must be >= 1");
  SweepTable table;
  table.experiment = std::move(experiment);
  table.base_seed = base_seed;
  table.epsilon = kEpsilon;
  table.max_iterations = kMaxIterations;
  table.alpha = kAlpha;
  table.gamma = kGamma;

  for (std::size_t pi = 0; pi < parameters.size(); ++pi) {
    const double param = parameters[pi];
    const double sigma = parameter_is_sigma ? param : 5.0;
    const double edge_prob = parameter_is_sigma ? fixed_edge_prob : param;
    std::vector<InstanceOutcome> bp_outcomes, ccbp_outcomes;
    for (int inst = 0; inst < instances_per_point; ++inst) {
      const std::uint64_t seed = mix_seed(base_seed, pi, inst);
      const SpinGlassInstance instance =
          random_spin_glass(10, edge_prob, CouplingLaw::uniform, sigma, seed);
      const GraphicalModel model = spin_glass_model(instance);
      const ExactResult exact = brute_marginals(model);

      OperatorConfig bp_cfg;
      bp_cfg.algorithm = Algorithm::bp;
      bp_cfg.semiring = Semiring::sum_product;
      bp_cfg.alpha = kAlpha;
      bp_outcomes.push_back(run_sum_product(model, bp_cfg, exact));

      OperatorConfig ccbp_cfg;
      ccbp_cfg.algorithm = Algorithm::ccbp;
      ccbp_cfg.semiring = Semiring::sum_product;
      ccbp_cfg.gamma = kGamma;
      ccbp_cfg.weights = uniform_weights(model.graph());
      ccbp_outcomes.push_back(run_sum_product(model, ccbp_cfg, exact));
    }
    table.rows.push_back(aggregate(param, "bp", bp_outcomes, base_seed));
    table.rows.push_back(aggregate(param, "ccbp", ccbp_outcomes, base_seed));
  }
  sort_rows(table.rows);
  return table;
}

int argmin_label(const std::vector<double>& v) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(v.size()); ++a)
    if (v[a] < v[best]) best = a;
  return best;
}

void append_real(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  out += buf;
}

}  // namespace

double mse(const std::vector<std::vector<double>>& a,
           const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse: size mismatch");
  if (a.empty()) return 0.0;
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size())
      throw std::invalid_argument("mse: size mismatch");
    for (std::size_t t = 0; t < a[i].size(); ++t) {
      const double d = a[i][t] - b[i][t];
      sum += d * d;
    }
  }
  return sum / static_cast<double>(a.size());
}

std::vector<std::vector<double>> mean_zero(
    const std::vector<std::vector<double>>& values) {
  std::vector<std::vector<double>> out = values;
  for (auto& v : out) {
    if (v.empty()) continue;
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
  }
  return out;
}

SweepTable sweep_sigma(std::uint64_t base_seed, int instances_per_point) {
  std::vector<double> sigmas;
  for (int k = 0; k <= 10; ++k) sigmas.push_back(0.5 * k);
  return pairwise_sweep("sigma", base_seed, instances_per_point, sigmas, 0.5,
                        /*parameter_is_sigma=*/true);
}

SweepTable sweep_edge_prob(std::uint64_t base_seed, int instances_per_point) {
  std::vector<double> probs;
  for (int k = 0; k <= 10; ++k) probs.push_back(0.1 * k);
  return pairwise_sweep("edges", base_seed, instances_per_point, probs, 0.0,
                        /*parameter_is_sigma=*/false);
}

SweepTable sweep_gamma(std::uint64_t base_seed) {
  SweepTable table;
  table.experiment = "gamma";
  table.base_seed = base_seed;
  table.epsilon = kEpsilon;
  table.max_iterations = kMaxIterations;
  table.alpha = kAlpha;

  const SpinGlassInstance instance =
      random_spin_glass(10, 0.5, CouplingLaw::normal, 1.0,
                        mix_seed(base_seed, 0, 0));
  const GraphicalModel model = spin_glass_model(instance);
  ExactResult exact = brute_max_marginals(model);
  // Normalize max-marginals per node so they are comparable to beliefs.
  for (auto& row : exact.per_node) {
    double sum = 0;
    for (double v : row) sum += v;
    for (double& v : row) v /= sum;
  }

  for (int k = 0; k <= 9; ++k) {
    const double gamma = 0.1 * k;
    OperatorConfig cfg;
    cfg.algorithm = Algorithm::ccbp;
    cfg.semiring = Semiring::max_product;
    cfg.gamma = gamma;
    cfg.weights = uniform_weights(model.graph());
    auto [mu, report] =
        run_fixed_point(make_step(model, cfg),
                        init_messages(model, Domain::probability), kEpsilon,
                        kMaxIterations);
    SweepRow row;
    row.parameter = gamma;
    row.algorithm = "ccbp";
    row.instance_count = 1;
    row.seed = base_seed;
    row.convergence_rate = report.converged ? 1.0 : 0.0;
    row.mean_iterations =
        report.converged ? report.iterations
                         : std::numeric_limits<double>::quiet_NaN();
    row.mean_mse =
        mse(normalized(beliefs_prob(model, mu)).values, exact.per_node);
    table.rows.push_back(row);
  }
  sort_rows(table.rows);
  return table;
}

OscillationReport oscillation_study(std::uint64_t base_seed, int seed_count) {
  if (seed_count < 1)
    throw std::invalid_argument("oscillation_study: seed_count must be >= 1");
  OscillationReport report;
  report.base_seed = base_seed;
  report.node_count = 12;

  for (int s = 0; s < seed_count; ++s) {
    OscillationSeedResult result;
    result.seed = mix_seed(base_seed, s, 0);
    const SpinGlassInstance instance = random_spin_glass(
        report.node_count, 1.0, CouplingLaw::normal, 1.0, result.seed);
    const GraphicalModel model = spin_glass_model(instance);
    const ExactResult exact = brute_min_marginals(model);

    // Damped min-sum bp, tracking beliefs over a trailing window to measure
    // oscillation amplitude when it fails to settle.
    OperatorConfig bp_cfg;
    bp_cfg.algorithm = Algorithm::bp;
    bp_cfg.semiring = Semiring::min_sum;
    bp_cfg.alpha = kAlpha;
    const StepFn bp_step = make_step(model, bp_cfg);
    MessageVector mu = init_messages(model, Domain::neg_log);
    std::deque<Beliefs> window;
    for (int t = 1; t <= kMaxIterations; ++t) {
      MessageVector next = bp_step(mu);
      const double r = metric_d(next, mu);
      mu = std::move(next);
      result.bp_iterations = t;
      window.push_back(beliefs_minsum(model, mu));
      if (window.size() > 100) window.pop_front();
      if (r < kEpsilon) {
        result.bp_converged = true;
        break;
      }
    }
    // (max - min) per belief entry across the window.
    if (!window.empty()) {
      const std::size_t n = window.front().values.size();
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < window.front().values[j].size(); ++a) {
          double lo = std::numeric_limits<double>::infinity();
          double hi = -std::numeric_limits<double>::infinity();
          for (const Beliefs& b : window) {
            lo = std::min(lo, b.values[j][a]);
            hi = std::max(hi, b.values[j][a]);
          }
          result.bp_oscillation_range =
              std::max(result.bp_oscillation_range, hi - lo);
        }
    }

    OperatorConfig ccbp_cfg;
    ccbp_cfg.algorithm = Algorithm::ccbp;
    ccbp_cfg.semiring = Semiring::min_sum;
    ccbp_cfg.gamma = kGamma;
    ccbp_cfg.weights = uniform_weights(model.graph());
    auto [cc_mu, cc_report] =
        run_fixed_point(make_step(model, ccbp_cfg),
                        init_messages(model, Domain::neg_log), kEpsilon,
                        kMaxIterations);
    result.ccbp_converged = cc_report.converged;
    result.ccbp_iterations = cc_report.iterations;

    const Beliefs cc_beliefs = beliefs_minsum(model, cc_mu);
    const std::vector<int> decoded = decode(cc_beliefs);
    for (int j = 0; j < report.node_count; ++j)
      if (decoded[j] == argmin_label(exact.per_node[j]))
        ++result.agreement_count;
    result.ccbp_beliefs_shifted = mean_zero(cc_beliefs.values);
    result.exact_min_marginals_shifted = mean_zero(exact.per_node);

    report.seeds.push_back(std::move(result));
  }
  return report;
}

std::string to_csv(const SweepTable& table) {
  std::string out =
      "parameter,algorithm,convergence_rate,mean_iterations,mean_mse,"
      "instances,seed\n";
  for (const SweepRow& row : table.rows) {
    append_real(out, row.parameter);
    out += ',';
    out += row.algorithm;
    out += ',';
    append_real(out, row.convergence_rate);
    out += ',';
    append_real(out, row.mean_iterations);
    out += ',';
    append_real(out, row.mean_mse);
    out += ',';
    out += std::to_string(row.instance_count);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << to_csv(table);
}

void write_csv(const SweepTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  f << to_csv(table);
  if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace ccbp

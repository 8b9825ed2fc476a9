#pragma once

// Exact reference computations by exhaustive enumeration.  Deliberately
// simple and independent of the message-passing code: every quantity is a
// direct loop over all m^n labellings, so these serve as ground truth in
// tests.  Enumeration refuses to start when m^n exceeds the budget.

#include <span>
#include <stdexcept>
#include <vector>

#include "ccbp/model.hpp"

namespace ccbp {

inline constexpr long long kDefaultEnumerationBudget = 20'000'000;

// E(x) = sum_i g_i(x_i) + sum_{ij in E} h_ij(x_i,x_j).
double energy(const GraphicalModel& model, std::span<const int> labelling);

struct ExactResult {
  std::vector<std::vector<double>> per_node;  // meaning depends on the call
  double partition = 0.0;                     // Z (sum-product calls)
  std::vector<int> map_labelling;             // lexicographically smallest
  double map_value = 0.0;                     // P(map) resp. E(map)
};

// per_node[i][t] = P(X_i = t); partition = Z; map = argmax P.
ExactResult brute_marginals(const GraphicalModel& model,
                            long long budget = kDefaultEnumerationBudget);

// per_node[i][t] = max_{x : x_i=t} P(x) (max-marginals, probability scale).
ExactResult brute_max_marginals(const GraphicalModel& model,
                                long long budget = kDefaultEnumerationBudget);

// per_node[i][t] = min_{x : x_i=t} E(x) (min-marginals, energy scale);
// map_value = min E.
ExactResult brute_min_marginals(const GraphicalModel& model,
                                long long budget = kDefaultEnumerationBudget);

// Just the lexicographically smallest energy minimiser and its energy.
ExactResult brute_map(const GraphicalModel& model,
                      long long budget = kDefaultEnumerationBudget);

// Visits all m^n labellings in lexicographic order (rightmost digit fastest).
// Throws when m^n > budget.
template <typename F>
void for_each_labelling(int n, int m, long long budget, F&& visit) {
  long long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= m;
    if (total > budget)
      throw std::invalid_argument("enumeration budget exceeded");
  }
  std::vector<int> x(n, 0);
  for (;;) {
    visit(static_cast<const std::vector<int>&>(x));
    int pos = n - 1;
    while (pos >= 0 && ++x[pos] == m) {
      x[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace ccbp

#pragma once

// Message storage and the log-max metric.  A message set holds one length-m
// vector per directed edge, in either representation:
//   probability: strictly positive entries mu_ij(x_j) > 0
//   neg_log:     entries are -log of the probability-domain values
// The two are isometric under the metric below, so fixed-point residuals are
// comparable across representations.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ccbp/model.hpp"

namespace ccbp {

enum class Domain { probability, neg_log };

class MessageVector {
 public:
  MessageVector() = default;
  MessageVector(int directed_count, int label_count, Domain domain,
                double fill);

  int directed_count() const { return d_; }
  int label_count() const { return m_; }
  Domain domain() const { return domain_; }

  std::span<double> at(int directed_index) {
    return {data_.data() + static_cast<std::size_t>(directed_index) * m_,
            static_cast<std::size_t>(m_)};
  }
  std::span<const double> at(int directed_index) const {
    return {data_.data() + static_cast<std::size_t>(directed_index) * m_,
            static_cast<std::size_t>(m_)};
  }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool same_shape(const MessageVector& other) const {
    return d_ == other.d_ && m_ == other.m_;
  }

 private:
  int d_ = 0;
  int m_ = 0;
  Domain domain_ = Domain::probability;
  std::vector<double> data_;
};

// All-ones (probability) / all-zeros (neg_log) start; the two correspond.
MessageVector init_messages(const GraphicalModel& model, Domain domain);

// Entries i.i.d. Unif[lo,hi); in the probability domain lo must be > 0.
MessageVector random_messages(const GraphicalModel& model, Domain domain,
                              std::uint64_t seed, double lo, double hi);

// Per-message sum-to-one rescaling; probability domain only.
MessageVector normalize(const MessageVector& mu);

// exp(-x) / -log(x) entrywise; an isometry for the metric below.
MessageVector convert_domain(const MessageVector& mu, Domain to);

// d(mu,nu) = max over directed edges and labels of |log mu - log nu|
// (equivalently, max absolute difference of neg-log values).
double metric_d(const MessageVector& mu, const MessageVector& nu);

struct FixedPointReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // d(mu_t, mu_{t-1}) per iteration
  double final_residual = std::numeric_limits<double>::infinity();
};

}  // namespace ccbp

#include "ccbp/messages.hpp"

#include <cmath>
#include <stdexcept>

#include "ccbp/rng.hpp"

namespace ccbp {

MessageVector::MessageVector(int directed_count, int label_count,
                             Domain domain, double fill)
    : d_(directed_count), m_(label_count), domain_(domain) {
  if (d_ < 0 || m_ < 1)
    throw std::invalid_argument("messages: bad shape");
  if (domain_ == Domain::probability && !(fill > 0))
    throw std::invalid_argument("messages: probability fill must be > 0");
  if (!std::isfinite(fill))
    throw std::invalid_argument("messages: non-finite fill");
  data_.assign(static_cast<std::size_t>(d_) * m_, fill);
}

MessageVector init_messages(const GraphicalModel& model, Domain domain) {
  const double fill = domain == Domain::probability ? 1.0 : 0.0;
  return MessageVector(model.graph().directed_count(), model.label_count(),
                       domain, fill);
}

MessageVector random_messages(const GraphicalModel& model, Domain domain,
                              std::uint64_t seed, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("random_messages: lo > hi");
  if (domain == Domain::probability && !(lo > 0))
    throw std::invalid_argument("random_messages: probability lo must be > 0");
  MessageVector mu(model.graph().directed_count(), model.label_count(), domain,
                   domain == Domain::probability ? 1.0 : 0.0);
  Rng rng(seed);
  for (double& v : mu.flat()) v = rng.uniform(lo, hi);
  return mu;
}

MessageVector normalize(const MessageVector& mu) {
  if (mu.domain() != Domain::probability)
    throw std::invalid_argument("normalize: requires probability domain");
  MessageVector out = mu;
  for (int d = 0; d < out.directed_count(); ++d) {
    auto v = out.at(d);
    double sum = 0;
    for (double x : v) sum += x;
    if (!(sum > 0) || !std::isfinite(sum))
      throw std::invalid_argument("normalize: message sum not positive");
    for (double& x : v) x /= sum;
  }
  return out;
}

MessageVector convert_domain(const MessageVector& mu, Domain to) {
  if (mu.domain() == to) return mu;
  MessageVector out = mu;
  // Rebuild with the target domain tag; values are transformed in place.
  out = MessageVector(mu.directed_count(), mu.label_count(), to,
                      to == Domain::probability ? 1.0 : 0.0);
  auto src = mu.flat();
  auto dst = out.flat();
  for (std::size_t k = 0; k < src.size(); ++k)
    dst[k] = to == Domain::neg_log ? -std::log(src[k]) : std::exp(-src[k]);
  return out;
}

double metric_d(const MessageVector& mu, const MessageVector& nu) {
  if (!mu.same_shape(nu))
    throw std::invalid_argument("metric_d: shape mismatch");
  if (mu.domain() != nu.domain())
    throw std::invalid_argument("metric_d: domain mismatch");
  auto a = mu.flat();
  auto b = nu.flat();
  double d = 0;
  if (mu.domain() == Domain::probability) {
    for (std::size_t k = 0; k < a.size(); ++k)
      d = std::max(d, std::fabs(std::log(a[k]) - std::log(b[k])));
  } else {
    for (std::size_t k = 0; k < a.size(); ++k)
      d = std::max(d, std::fabs(a[k] - b[k]));
  }
  return d;
}

}  // namespace ccbp

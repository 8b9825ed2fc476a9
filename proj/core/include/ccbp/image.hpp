#pragma once

// Image restoration on a 4-connected grid with 256 labels per pixel:
// data cost (x - y)^2 and truncated-quadratic smoothness
// lambda * min((x_i - x_j)^2, tau).  Inference is min-sum message passing
// with uniform convex weights (1/(degree-1)) and discount gamma, which has
// a unique fixed point reached geometrically from the all-zeros start.
// Messages for this cost family are computed in O(m) per edge via a
// quadratic lower envelope plus the truncation plateau.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccbp/messages.hpp"
#include "ccbp/model.hpp"

namespace ccbp {

struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (grayscale) or 3 (RGB)
  // One plane per channel, row-major, width*height bytes each.
  std::vector<std::vector<std::uint8_t>> planes;

  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height &&
           channels == other.channels;
  }
};

struct RestoreParams {
  double lambda = 3.0;   // smoothness weight
  double tau = 100.0;    // truncation of the quadratic penalty
  double gamma = 0.99;   // discount, [0,1)
  double epsilon = 1e-2; // stopping threshold on the message residual
  int max_iter = 1000;

  void validate() const;
};

// Binary PGM (P5, grayscale) and PPM (P6, RGB); maxval must be 255.
// '#' comments are accepted while reading headers, never written.
Image read_image(const std::string& path);
void write_image(const Image& image, const std::string& path);

// Adds Normal(0, sigma^2) noise per pixel, rounds half away from zero,
// clamps to 0..255.  Deterministic per seed.
Image corrupt(const Image& image, double sigma, std::uint64_t seed);

// Rounding/clamping rule used by corrupt, exposed for direct testing.
std::uint8_t quantize_pixel(double value);

// Grid model for one channel: m = 256, g_i(x) = (x - y_i)^2,
// shared edge cost lambda * min((a-b)^2, tau).
GraphicalModel build_image_model(std::span<const std::uint8_t> channel,
                                 int width, int height,
                                 const RestoreParams& params);

// min over a of (g_row[a] + incoming_sum[a] + lambda * min((a-b)^2, tau))
// for every target label b, in O(m): quadratic lower envelope, then a
// pointwise min with the truncation plateau min(base) + lambda*tau.
std::vector<double> minsum_message_fast(std::span<const double> g_row,
                                        std::span<const double> incoming_sum,
                                        double lambda, double tau);

// O(m^2) reference evaluation of the same quantity.
std::vector<double> minsum_message_naive(std::span<const double> g_row,
                                         std::span<const double> incoming_sum,
                                         double lambda, double tau);

// One full parallel message update for an image model, using the fast
// per-edge computation.  weights are per directed edge (uniform_weights).
MessageVector image_step(const GraphicalModel& model,
                         std::span<const double> weights,
                         const RestoreParams& params, const MessageVector& mu);

// Restores each channel independently; returns the restored image and one
// report per channel.  Deterministic: no RNG is involved.
std::pair<Image, std::vector<FixedPointReport>> restore(
    const Image& noisy, const RestoreParams& params);

}  // namespace ccbp

#include "ccbp/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ccbp/operators.hpp"
#include "ccbp/rng.hpp"

namespace ccbp {

namespace {

constexpr int kLabels = 256;

void check_image(const Image& img) {
  if (img.width < 1 || img.height < 1)
    throw std::invalid_argument("image: dimensions must be positive");
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("image: channels must be 1 or 3");
  if (static_cast<int>(img.planes.size()) != img.channels)
    throw std::invalid_argument("image: plane count mismatch");
  const std::size_t expect =
      static_cast<std::size_t>(img.width) * img.height;
  for (const auto& p : img.planes)
    if (p.size() != expect)
      throw std::invalid_argument("image: plane size mismatch");
}

// Reads one whitespace-delimited header token, skipping '#' comments.
// The delimiter after the token is left in the stream, so the single
// whitespace byte separating the header from the payload stays intact.
std::string next_token(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) break;
    if (c == '#') {
      int d;
      while ((d = in.get()) != EOF && d != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  std::string tok;
  for (;;) {
    const int c = in.peek();
    if (c == EOF || std::isspace(c)) break;
    tok.push_back(static_cast<char>(in.get()));
  }
  if (tok.empty()) throw std::runtime_error("image: truncated header");
  return tok;
}

int parse_dim(const std::string& tok) {
  std::size_t pos = 0;
  int v;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("image: malformed header value '" + tok + "'");
  }
  if (pos != tok.size() || v < 1)
    throw std::runtime_error("image: malformed header value '" + tok + "'");
  return v;
}

}  // namespace

void RestoreParams::validate() const {
  if (!(lambda >= 0) || !std::isfinite(lambda))
    throw std::invalid_argument("restore: lambda must be >= 0");
  if (!(tau >= 0) || !std::isfinite(tau))
    throw std::invalid_argument("restore: tau must be >= 0");
  if (!(gamma >= 0 && gamma < 1))
    throw std::invalid_argument("restore: gamma must lie in [0,1)");
  if (!(epsilon > 0))
    throw std::invalid_argument("restore: epsilon must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("restore: max_iter must be >= 1");
}

Image read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("image: cannot open " + path);
  const std::string magic = next_token(in);
  Image img;
  if (magic == "P5")
    img.channels = 1;
  else if (magic == "P6")
    img.channels = 3;
  else
    throw std::runtime_error("image: unsupported magic '" + magic + "'");
  img.width = parse_dim(next_token(in));
  img.height = parse_dim(next_token(in));
  const int maxval = parse_dim(next_token(in));
  if (maxval != 255)
    throw std::runtime_error("image: maxval must be 255, got " +
                             std::to_string(maxval));
  // Exactly one whitespace byte separates the header from the payload.
  const int sep = in.get();
  if (sep == EOF || !std::isspace(sep))
    throw std::runtime_error("image: missing header/payload separator");

  const std::size_t pixels =
      static_cast<std::size_t>(img.width) * img.height;
  std::vector<std::uint8_t> raw(pixels * img.channels);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw std::runtime_error("image: truncated payload");

  img.planes.assign(img.channels, std::vector<std::uint8_t>(pixels));
  for (std::size_t p = 0; p < pixels; ++p)
    for (int c = 0; c < img.channels; ++c)
      img.planes[c][p] = raw[p * img.channels + c];
  return img;
}

void write_image(const Image& img, const std::string& path) {
  check_image(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("image: cannot open " + path);
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n255\n";
  const std::size_t pixels =
      static_cast<std::size_t>(img.width) * img.height;
  std::vector<std::uint8_t> raw(pixels * img.channels);
  for (std::size_t p = 0; p < pixels; ++p)
    for (int c = 0; c < img.channels; ++c)
      raw[p * img.channels + c] = img.planes[c][p];
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("image: write failed for " + path);
}

std::uint8_t quantize_pixel(double value) {
  // Round half away from zero, then clamp to the 8-bit range.
  const double rounded = std::round(value);
  if (rounded <= 0.0) return 0;
  if (rounded >= 255.0) return 255;
  return static_cast<std::uint8_t>(rounded);
}

Image corrupt(const Image& image, double sigma, std::uint64_t seed) {
  check_image(image);
  if (!(sigma >= 0)) throw std::invalid_argument("corrupt: sigma must be >= 0");
  Image out = image;
  if (sigma == 0.0) return out;
  Rng rng(seed);
  for (auto& plane : out.planes)
    for (std::uint8_t& px : plane)
      px = quantize_pixel(static_cast<double>(px) + rng.normal(0.0, sigma));
  return out;
}

GraphicalModel build_image_model(std::span<const std::uint8_t> channel,
                                 int width, int height,
                                 const RestoreParams& params) {
  params.validate();
  if (static_cast<std::size_t>(width) * height != channel.size())
    throw std::invalid_argument("build_image_model: channel size mismatch");
  Graph grid = grid_graph(width, height);
  std::vector<std::vector<double>> g(grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i) {
    g[i].resize(kLabels);
    const double y = channel[i];
    for (int a = 0; a < kLabels; ++a) {
      const double d = a - y;
      g[i][a] = d * d;
    }
  }
  // All edges share a single truncated-quadratic cost matrix.
  std::vector<double> h(static_cast<std::size_t>(kLabels) * kLabels);
  for (int a = 0; a < kLabels; ++a)
    for (int b = 0; b < kLabels; ++b) {
      const double d = a - b;
      h[a * kLabels + b] = params.lambda * std::min(d * d, params.tau);
    }
  return GraphicalModel::with_shared_edge_cost(std::move(grid), kLabels,
                                               std::move(g), std::move(h));
}

std::vector<double> minsum_message_naive(std::span<const double> g_row,
                                         std::span<const double> incoming_sum,
                                         double lambda, double tau) {
  if (g_row.size() != incoming_sum.size())
    throw std::invalid_argument("minsum_message: size mismatch");
  const int m = static_cast<int>(g_row.size());
  std::vector<double> out(m);
  for (int b = 0; b < m; ++b) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < m; ++a) {
      const double d = a - b;
      best = std::min(best, g_row[a] + incoming_sum[a] +
                                lambda * std::min(d * d, tau));
    }
    out[b] = best;
  }
  return out;
}

namespace {

// Scratch for the envelope construction, reusable across calls so the hot
// restoration loop performs no per-message allocations.
struct EnvelopeScratch {
  std::vector<int> v;     // parabola owner per envelope segment
  std::vector<double> z;  // segment boundaries (one more than owners)

  void resize(int m) {
    v.resize(m);
    z.resize(m + 1);
  }
};

// Writes min_a { base[a] + lambda * min((a-b)^2, tau) } for every b into
// `out`.  `base_min` must be the minimum of `base`.
void truncated_quadratic_into(std::span<const double> base, double base_min,
                              double lambda, double tau, EnvelopeScratch& s,
                              std::span<double> out) {
  const int m = static_cast<int>(base.size());
  if (lambda == 0.0 || tau == 0.0) {
    std::fill(out.begin(), out.end(), base_min);
    return;
  }

  // Lower envelope of the parabolas b -> base[a] + lambda*(b-a)^2, following
  // the classic O(m) distance-transform construction.
  s.resize(m);
  int* v = s.v.data();
  double* z = s.z.data();
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    // Abscissa where parabola q overtakes parabola p.
    return ((base[q] + lambda * q * q) - (base[p] + lambda * p * p)) /
           (2.0 * lambda * (q - p));
  };
  for (int q = 1; q < m; ++q) {
    double x = intersect(q, v[k]);
    while (x <= z[k]) {
      --k;
      x = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = x;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  const double plateau = base_min + lambda * tau;
  k = 0;
  for (int b = 0; b < m; ++b) {
    while (z[k + 1] < b) ++k;
    const double d = b - v[k];
    out[b] = std::min(base[v[k]] + lambda * d * d, plateau);
  }
}

}  // namespace

std::vector<double> minsum_message_fast(std::span<const double> g_row,
                                        std::span<const double> incoming_sum,
                                        double lambda, double tau) {
  if (g_row.size() != incoming_sum.size())
    throw std::invalid_argument("minsum_message: size mismatch");
  const int m = static_cast<int>(g_row.size());
  std::vector<double> base(m);
  double base_min = std::numeric_limits<double>::infinity();
  for (int a = 0; a < m; ++a) {
    base[a] = g_row[a] + incoming_sum[a];
    base_min = std::min(base_min, base[a]);
  }
  std::vector<double> out(m);
  EnvelopeScratch scratch;
  truncated_quadratic_into(base, base_min, lambda, tau, scratch, out);
  return out;
}

MessageVector image_step(const GraphicalModel& model,
                         std::span<const double> weights,
                         const RestoreParams& params,
                         const MessageVector& mu) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  if (mu.domain() != Domain::neg_log)
    throw std::invalid_argument("image_step: requires neg_log domain");
  if (mu.directed_count() != graph.directed_count() || mu.label_count() != m)
    throw std::invalid_argument("image_step: message shape mismatch");
  if (static_cast<int>(weights.size()) != graph.directed_count())
    throw std::invalid_argument("image_step: one weight per directed edge");

  MessageVector out(graph.directed_count(), m, Domain::neg_log, 0.0);
  std::vector<double> total(m);
  std::vector<double> base(m);
  std::vector<int> in_dir;
  EnvelopeScratch scratch;
  for (int i = 0; i < graph.node_count(); ++i) {
    const auto g_row = model.node_costs(i);
    const auto& nbrs = graph.neighbors(i);
    const int deg = static_cast<int>(nbrs.size());
    // Directed indices of the incoming edges k -> i, hoisted out of the
    // per-label loops, plus the weighted sum over all of them; each outgoing
    // message then just subtracts its excluded neighbor's term.
    in_dir.clear();
    for (int k : nbrs) in_dir.push_back(graph.directed_index(k, i));
    std::fill(total.begin(), total.end(), 0.0);
    for (int t = 0; t < deg; ++t) {
      const auto src = mu.at(in_dir[t]);
      const double w = weights[in_dir[t]];
      for (int a = 0; a < m; ++a) total[a] += w * src[a];
    }
    for (int t = 0; t < deg; ++t) {
      const auto excl = mu.at(in_dir[t]);
      const double w = weights[in_dir[t]];
      double base_min = std::numeric_limits<double>::infinity();
      for (int a = 0; a < m; ++a) {
        const double b =
            g_row[a] + params.gamma * (total[a] - w * excl[a]);
        base[a] = b;
        base_min = std::min(base_min, b);
      }
      auto dst = out.at(graph.directed_index(i, nbrs[t]));
      truncated_quadratic_into(base, base_min, params.lambda, params.tau,
                               scratch, dst);
    }
  }
  return out;
}

std::pair<Image, std::vector<FixedPointReport>> restore(
    const Image& noisy, const RestoreParams& params) {
  check_image(noisy);
  params.validate();
  Image out = noisy;
  std::vector<FixedPointReport> reports;
  for (int c = 0; c < noisy.channels; ++c) {
    const GraphicalModel model =
        build_image_model(noisy.planes[c], noisy.width, noisy.height, params);
    const std::vector<double> weights = uniform_weights(model.graph());
    const StepFn step = [&](const MessageVector& mu) {
      return image_step(model, weights, params, mu);
    };
    auto [mu, report] = run_fixed_point(
        step, init_messages(model, Domain::neg_log), params.epsilon,
        params.max_iter);
    const std::vector<int> labels = decode(beliefs_minsum(model, mu));
    for (std::size_t p = 0; p < labels.size(); ++p)
      out.planes[c][p] = static_cast<std::uint8_t>(labels[p]);
    reports.push_back(std::move(report));
  }
  return {std::move(out), std::move(reports)};
}

}  // namespace ccbp

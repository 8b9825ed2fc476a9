#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccbp/image.hpp"
#include "ccbp/operators.hpp"
#include "ccbp/oracle.hpp"
#include "ccbp/rng.hpp"

namespace {

using namespace ccbp;

Image random_image(int width, int height, int channels, std::uint64_t seed) {
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  Rng rng(seed);
  for (int c = 0; c < channels; ++c) {
    std::vector<std::uint8_t> plane(
        static_cast<std::size_t>(width) * height);
    for (auto& px : plane) px = static_cast<std::uint8_t>(rng.below(256));
    img.planes.push_back(std::move(plane));
  }
  return img;
}

Image flat_image(int width, int height, std::uint8_t value) {
  Image img;
  img.width = width;
  img.height = height;
  img.channels = 1;
  img.planes.assign(1, std::vector<std::uint8_t>(
                           static_cast<std::size_t>(width) * height, value));
  return img;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

double image_mse(const Image& a, const Image& b) {
  REQUIRE(a.same_shape(b));
  double sum = 0;
  std::size_t n = 0;
  for (int c = 0; c < a.channels; ++c)
    for (std::size_t p = 0; p < a.planes[c].size(); ++p, ++n) {
      const double d = double(a.planes[c][p]) - double(b.planes[c][p]);
      sum += d * d;
    }
  return sum / static_cast<double>(n);
}

std::vector<int> plane_as_labelling(const Image& img, int channel) {
  return std::vector<int>(img.planes[channel].begin(),
                          img.planes[channel].end());
}

}  // namespace

TEST_SUITE("image io") {
  TEST_CASE("grayscale round trip") {
    const TempFile f("roundtrip_gray.pgm");
    const Image tiny = flat_image(1, 1, 0);
    write_image(tiny, f.path);
    const Image back = read_image(f.path);
    CHECK(back.same_shape(tiny));
    CHECK(back.planes == tiny.planes);

    const Image img = random_image(37, 23, 1, 5);
    write_image(img, f.path);
    const Image again = read_image(f.path);
    CHECK(again.same_shape(img));
    CHECK(again.planes == img.planes);
  }

  TEST_CASE("color round trip") {
    const TempFile f("roundtrip_color.ppm");
    const Image img = random_image(19, 31, 3, 6);
    write_image(img, f.path);
    const Image back = read_image(f.path);
    CHECK(back.same_shape(img));
    CHECK(back.planes == img.planes);
  }

  TEST_CASE("header comments are accepted") {
    const TempFile f("commented.pgm");
    write_bytes(f.path,
                "P5 # magic\n# a full comment line\n2 # width\n1\n255\n\x10\x20");
    const Image img = read_image(f.path);
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.channels == 1);
    CHECK(img.planes[0] == std::vector<std::uint8_t>{0x10, 0x20});
  }

  TEST_CASE("malformed files are rejected") {
    const TempFile f("broken.pgm");
    CHECK_THROWS_AS(read_image("definitely_missing.pgm"), std::runtime_error);

    write_bytes(f.path, "P4\n1 1\n255\nx");  // unsupported magic
    CHECK_THROWS_AS(read_image(f.path), std::runtime_error);

    write_bytes(f.path, "P5\n1 1\n127\nx");  // wrong max value
    CHECK_THROWS_AS(read_image(f.path), std::runtime_error);

    write_bytes(f.path, "P5\n2 2\n255\nab");  // payload cut short
    CHECK_THROWS_AS(read_image(f.path), std::runtime_error);

    write_bytes(f.path, "P5\n0 1\n255\n");  // degenerate size
    CHECK_THROWS_AS(read_image(f.path), std::runtime_error);

    write_bytes(f.path, "P6\n1 1\n255\nab");  // rgb needs 3 bytes
    CHECK_THROWS_AS(read_image(f.path), std::runtime_error);
  }

  TEST_CASE("write rejects inconsistent images") {
    const TempFile f("invalid_write.pgm");
    Image img = flat_image(2, 2, 9);
    img.channels = 2;
    img.planes.push_back(img.planes[0]);
    CHECK_THROWS_AS(write_image(img, f.path), std::invalid_argument);

    Image short_plane = flat_image(2, 2, 9);
    short_plane.planes[0].pop_back();
    CHECK_THROWS_AS(write_image(short_plane, f.path), std::invalid_argument);

    CHECK_THROWS_AS(write_image(flat_image(2, 2, 9), "no_such_dir/x.pgm"),
                    std::runtime_error);
  }
}

TEST_SUITE("image noise") {
  TEST_CASE("pixel quantization rounds half away from zero and clamps") {
    CHECK(quantize_pixel(0.0) == 0);
    CHECK(quantize_pixel(12.4) == 12);
    CHECK(quantize_pixel(12.5) == 13);
    CHECK(quantize_pixel(100.5) == 101);
    CHECK(quantize_pixel(254.49) == 254);
    CHECK(quantize_pixel(254.5) == 255);
    CHECK(quantize_pixel(270.0) == 255);
    CHECK(quantize_pixel(-0.4) == 0);
    CHECK(quantize_pixel(-0.5) == 0);  // rounds to -1, then clamps
    CHECK(quantize_pixel(-5.0) == 0);
    CHECK(quantize_pixel(255.0) == 255);
  }

  TEST_CASE("zero sigma is the identity") {
    const Image img = random_image(8, 8, 3, 7);
    const Image same = corrupt(img, 0.0, 99);
    CHECK(same.same_shape(img));
    CHECK(same.planes == img.planes);
  }

  TEST_CASE("noise is deterministic per seed") {
    const Image img = random_image(16, 16, 1, 8);
    const Image a = corrupt(img, 25.0, 4);
    const Image b = corrupt(img, 25.0, 4);
    const Image c = corrupt(img, 25.0, 5);
    CHECK(a.planes == b.planes);
    CHECK(a.planes != c.planes);
  }

  TEST_CASE("empirical deviation matches sigma") {
    const Image gray = flat_image(256, 256, 128);
    const Image noisy = corrupt(gray, 50.0, 12);
    double sum = 0, sq = 0;
    const auto& plane = noisy.planes[0];
    for (std::uint8_t px : plane) {
      const double d = double(px) - 128.0;
      sum += d;
      sq += d * d;
    }
    const double n = static_cast<double>(plane.size());
    const double mean = sum / n;
    const double stddev = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) < 1.0);
    CHECK(stddev == doctest::Approx(50.0).epsilon(0.05));
  }
}

TEST_SUITE("image model") {
  TEST_CASE("grid model costs") {
    const std::vector<std::uint8_t> pixels{10, 200, 0, 255, 128, 60};
    RestoreParams params;  // lambda 3, tau 100
    const GraphicalModel model =
        build_image_model(pixels, 3, 2, params);
    CHECK(model.label_count() == 256);
    CHECK(model.graph().node_count() == 6);
    CHECK(model.graph().edge_count() == 7);  // 3*(2-1) + 2*(3-1)
    // Data costs are squared differences from the observation.
    CHECK(model.node_cost(0, 10) == 0.0);
    CHECK(model.node_cost(0, 13) == 9.0);
    CHECK(model.node_cost(1, 0) == 40000.0);
    CHECK(model.node_cost(3, 255) == 0.0);
    // Smoothness is a truncated quadratic shared by every edge.
    CHECK(model.edge_cost(0, 1, 7, 7) == 0.0);
    CHECK(model.edge_cost(0, 1, 3, 4) == 3.0);           // lambda * 1
    CHECK(model.edge_cost(0, 1, 4, 3) == 3.0);
    CHECK(model.edge_cost(0, 1, 0, 9) == 3.0 * 81.0);    // below cutoff
    CHECK(model.edge_cost(0, 1, 0, 10) == 3.0 * 100.0);  // exactly at cutoff
    CHECK(model.edge_cost(0, 1, 0, 255) == 300.0);       // truncated
    CHECK(model.edge_cost(0, 3, 0, 255) == 300.0);       // same on every edge
  }

  TEST_CASE("restore parameter validation") {
    RestoreParams ok;
    CHECK_NOTHROW(ok.validate());
    RestoreParams bad = ok;
    bad.lambda = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.tau = -0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.max_iter = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_SUITE("image messages") {
  TEST_CASE("fast envelope matches the quadratic reference") {
    Rng rng(21);
    for (int trial = 0; trial < 60; ++trial) {
      const int m = (trial % 3 == 0) ? 256 : 1 + int(rng.below(40));
      std::vector<double> g(m), in(m);
      for (int a = 0; a < m; ++a) {
        g[a] = rng.uniform(0.0, 5000.0);
        in[a] = rng.uniform(-50.0, 50.0);
      }
      const double lambda =
          std::vector<double>{0.5, 3.0, 10.0}[trial % 3];
      const double tau =
          std::vector<double>{5.0, 100.0, 1e12}[(trial / 3) % 3];
      const auto fast = minsum_message_fast(g, in, lambda, tau);
      const auto slow = minsum_message_naive(g, in, lambda, tau);
      REQUIRE(fast.size() == slow.size());
      for (int b = 0; b < m; ++b)
        CHECK(std::abs(fast[b] - slow[b]) < 1e-9);
    }
  }

  TEST_CASE("degenerate smoothness gives a constant message") {
    const std::vector<double> g{4.0, 1.0, 7.0};
    const std::vector<double> in{0.5, 0.25, 0.0};
    for (const auto& [lambda, tau] :
         std::vector<std::pair<double, double>>{{0.0, 100.0}, {3.0, 0.0}}) {
      const auto msg = minsum_message_fast(g, in, lambda, tau);
      REQUIRE(msg.size() == 3);
      for (double v : msg) CHECK(v == 1.25);  // min of g + in
      CHECK(msg == minsum_message_naive(g, in, lambda, tau));
    }
  }

  TEST_CASE("image step equals the generic operator") {
    const std::vector<std::uint8_t> pixels{40, 90, 200, 15, 230, 128};
    RestoreParams params;
    params.gamma = 0.7;
    const GraphicalModel model = build_image_model(pixels, 3, 2, params);
    const std::vector<double> weights = uniform_weights(model.graph());
    OperatorConfig cfg;
    cfg.algorithm = Algorithm::ccbp;
    cfg.semiring = Semiring::min_sum;
    cfg.gamma = params.gamma;
    cfg.weights = weights;
    cfg.validate(model.graph());
    const MessageVector mu =
        random_messages(model, Domain::neg_log, 33, -2.0, 2.0);
    const MessageVector fast = image_step(model, weights, params, mu);
    const MessageVector generic = ccbp_step_minsum(model, cfg, mu);
    CHECK(metric_d(fast, generic) < 1e-9);
  }
}

TEST_SUITE("image restore") {
  TEST_CASE("zero smoothness returns the observation") {
    const Image img = random_image(6, 5, 1, 44);
    RestoreParams params;
    params.lambda = 0.0;
    const auto [restored, reports] = restore(img, params);
    CHECK(restored.planes == img.planes);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].converged);
  }

  TEST_CASE("constant images are fixed points") {
    const Image img = flat_image(7, 4, 77);
    const auto [restored, reports] = restore(img, RestoreParams{});
    CHECK(restored.planes == img.planes);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].converged);
  }

  TEST_CASE("restoration lowers energy and error") {
    // Two-tone target so the truncated smoothness keeps the step edge.
    Image clean = flat_image(12, 10, 60);
    for (int r = 0; r < 10; ++r)
      for (int c = 6; c < 12; ++c) clean.planes[0][r * 12 + c] = 190;
    const Image noisy = corrupt(clean, 20.0, 3);
    RestoreParams params;
    const auto [restored, reports] = restore(noisy, params);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].converged);

    const GraphicalModel model =
        build_image_model(noisy.planes[0], 12, 10, params);
    const double e_noisy = energy(model, plane_as_labelling(noisy, 0));
    const double e_restored = energy(model, plane_as_labelling(restored, 0));
    CHECK(e_restored < e_noisy);
    CHECK(image_mse(restored, clean) < image_mse(noisy, clean));
  }

  TEST_CASE("residuals shrink geometrically") {
    const Image noisy = corrupt(flat_image(9, 9, 120), 30.0, 16);
    RestoreParams params;
    const auto [restored, reports] = restore(noisy, params);
    REQUIRE(reports.size() == 1);
    const auto& history = reports[0].residual_history;
    REQUIRE(history.size() >= 2);
    for (std::size_t t = 1; t + 1 < history.size(); ++t)
      CHECK(history[t + 1] <= params.gamma * history[t] * (1.0 + 1e-6));
  }

  TEST_CASE("restoration is deterministic") {
    const Image noisy = corrupt(random_image(10, 8, 3, 2), 40.0, 9);
    const auto [a, ra] = restore(noisy, RestoreParams{});
    const auto [b, rb] = restore(noisy, RestoreParams{});
    CHECK(a.planes == b.planes);
    REQUIRE(ra.size() == 3);
    REQUIRE(rb.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(ra[c].iterations == rb[c].iterations);
      CHECK(ra[c].final_residual == rb[c].final_residual);
    }
  }
}

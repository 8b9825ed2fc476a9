// End-to-end checks of the command-line tool: exit codes, output shape,
// and byte-level determinism of generated files.  The binary path comes
// from the build system via CCBP_CLI_PATH.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, merged
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CCBP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.output.append(buf, got);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

const std::string kTreeModel =
    "mrf 1\n"
    "nodes 3 2\n"
    "node 0 0 0.7\n"
    "node 1 0.2 0\n"
    "node 2 0 0.1\n"
    "edge 0 1 0 0.5 0.5 0\n"
    "edge 1 2 0 0.3 0.3 0\n";

const std::string kTriangleModel =
    "mrf 1\n"
    "nodes 3 2\n"
    "node 0 0 0\n"
    "node 1 0 0\n"
    "node 2 0 0\n"
    "edge 0 1 0 3 3 0\n"
    "edge 0 2 0 3 3 0\n"
    "edge 1 2 0 3 3 0\n";

std::string tiny_pgm() {
  std::string bytes = "P5\n6 4\n255\n";
  for (int p = 0; p < 24; ++p)
    bytes.push_back(static_cast<char>(p < 12 ? 40 : 200));
  return bytes;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("infer reports beliefs labels and oracle agreement") {
    const TempFile model("cli_tree.mrf");
    write_text(model.path, kTreeModel);
    const RunResult r = run_cli("infer " + model.path +
                                " --algorithm ccbp --semiring minsum"
                                " --oracle");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "algorithm=ccbp semiring=minsum gamma=0.9"));
    CHECK(contains(r.output, "converged=true"));
    CHECK(contains(r.output, "belief 0"));
    CHECK(contains(r.output, "belief 2"));
    CHECK(contains(r.output, "labels 0 0 0"));
    CHECK(contains(r.output, "agreement=3/3"));
  }

  TEST_CASE("infer is deterministic") {
    const TempFile model("cli_det.mrf");
    write_text(model.path, kTriangleModel);
    const std::string args = "infer " + model.path + " --semiring sum";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
  }

  TEST_CASE("bp and ccbp are both runnable on every semiring") {
    const TempFile model("cli_semirings.mrf");
    write_text(model.path, kTreeModel);
    for (const std::string algorithm : {"bp", "ccbp"})
      for (const std::string semiring : {"sum", "max", "minsum"}) {
        const RunResult r = run_cli("infer " + model.path + " --algorithm " +
                                    algorithm + " --semiring " + semiring +
                                    " --oracle");
        CAPTURE(algorithm);
        CAPTURE(semiring);
        CHECK(r.exit_code == 0);
        CHECK(contains(r.output, "converged=true"));
        // On this tree every method decodes the exact labelling.
        CHECK(contains(r.output, "agreement=3/3"));
      }
  }

  TEST_CASE("non-convergence warns but exits cleanly") {
    const TempFile model("cli_loopy.mrf");
    write_text(model.path, kTriangleModel);
    const RunResult r = run_cli("infer " + model.path +
                                " --algorithm bp --semiring sum --max-iter 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "converged=false"));
    CHECK(contains(r.output, "warning: no fixed point within 1 iterations"));
  }

  TEST_CASE("flag errors exit with code 2") {
    const TempFile model("cli_flags.mrf");
    write_text(model.path, kTreeModel);
    CHECK(run_cli("infer " + model.path + " --gamma 1.0").exit_code == 2);
    CHECK(run_cli("infer " + model.path + " --gamma 0.999").exit_code == 0);
    CHECK(run_cli("infer " + model.path + " --alpha 1.0").exit_code == 2);
    CHECK(run_cli("infer " + model.path + " --semiring bogus").exit_code == 2);
    CHECK(run_cli("infer " + model.path + " --algorithm nope").exit_code == 2);
    CHECK(run_cli("infer " + model.path + " --weights custom").exit_code == 2);
    CHECK(run_cli("infer " + model.path + " --epsilon 0").exit_code == 2);
    CHECK(run_cli("infer " + model.path + " --max-iter 0").exit_code == 2);
    CHECK(run_cli("infer").exit_code == 2);           // missing model path
    CHECK(run_cli("").exit_code == 2);                // subcommand required
    CHECK(run_cli("frobnicate x").exit_code == 2);    // unknown subcommand
    CHECK(run_cli("sweep tau --out x.csv").exit_code == 2);  // unknown kind
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(contains(run_cli("--help").output, "infer"));
  }

  TEST_CASE("unreadable or malformed inputs exit with code 3") {
    CHECK(run_cli("infer cli_missing.mrf").exit_code == 3);
    const TempFile model("cli_bad.mrf");
    write_text(model.path, "mrf 2\nnodes 1 2\nnode 0 0 0\n");
    CHECK(run_cli("infer " + model.path).exit_code == 3);
    const TempFile image("cli_bad.pgm");
    write_text(image.path, "P5\n4 4\n255\nshort");
    CHECK(run_cli("restore " + image.path + " cli_out.pgm").exit_code == 3);
    CHECK(run_cli("corrupt cli_missing.pgm cli_out.pgm").exit_code == 3);
  }

  TEST_CASE("sweep writes deterministic csv files") {
    const TempFile a("cli_sweep_a.csv");
    const TempFile b("cli_sweep_b.csv");
    const RunResult ra = run_cli("sweep gamma --seed 7 --out " + a.path);
    const RunResult rb = run_cli("sweep gamma --seed 7 --out " + b.path);
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    CHECK(contains(ra.output, "rows=10"));
    const std::string bytes_a = read_bytes(a.path);
    CHECK(bytes_a == read_bytes(b.path));
    CHECK(contains(bytes_a,
                   "parameter,algorithm,convergence_rate,mean_iterations,"
                   "mean_mse,instances,seed"));
    // 10 gamma rows plus the header.
    CHECK(std::count(bytes_a.begin(), bytes_a.end(), '\n') == 11);

    const TempFile c("cli_sweep_c.csv");
    const RunResult rc =
        run_cli("sweep sigma --seed 3 --instances 2 --out " + c.path);
    CHECK(rc.exit_code == 0);
    CHECK(contains(rc.output, "rows=22"));
    const std::string bytes_c = read_bytes(c.path);
    CHECK(std::count(bytes_c.begin(), bytes_c.end(), '\n') == 23);

    CHECK(run_cli("sweep sigma --seed 3 --out no_dir/x.csv --instances 2")
              .exit_code == 3);
  }

  TEST_CASE("corrupt with zero sigma copies the image") {
    const TempFile in("cli_card.pgm");
    const TempFile out("cli_card_noisy.pgm");
    write_text(in.path, tiny_pgm());
    const RunResult r =
        run_cli("corrupt " + in.path + " " + out.path + " --sigma 0");
    CHECK(r.exit_code == 0);
    CHECK(read_bytes(out.path) == tiny_pgm());
    CHECK(run_cli("corrupt " + in.path + " " + out.path + " --sigma -1")
              .exit_code == 2);
  }

  TEST_CASE("corrupt is deterministic per seed") {
    const TempFile in("cli_noise_in.pgm");
    const TempFile a("cli_noise_a.pgm");
    const TempFile b("cli_noise_b.pgm");
    write_text(in.path, tiny_pgm());
    run_cli("corrupt " + in.path + " " + a.path + " --sigma 50 --seed 5");
    run_cli("corrupt " + in.path + " " + b.path + " --sigma 50 --seed 5");
    CHECK(read_bytes(a.path) == read_bytes(b.path));
    const TempFile c("cli_noise_c.pgm");
    run_cli("corrupt " + in.path + " " + c.path + " --sigma 50 --seed 6");
    CHECK(read_bytes(a.path) != read_bytes(c.path));
  }

  TEST_CASE("restore keeps a constant image and lowers noisy energy") {
    const TempFile flat("cli_flat.pgm");
    std::string bytes = "P5\n5 4\n255\n" + std::string(20, char(90));
    write_text(flat.path, bytes);
    const TempFile out("cli_flat_out.pgm");
    const RunResult r = run_cli("restore " + flat.path + " " + out.path);
    CHECK(r.exit_code == 0);
    CHECK(read_bytes(out.path) == bytes);
    CHECK(contains(r.output, "channel 0: converged=true"));

    // Corrupt-then-restore: the printed restored energy must undercut the
    // noisy labelling's energy, and the output must be reproducible.
    const TempFile card("cli_card2.pgm");
    const TempFile noisy("cli_card2_noisy.pgm");
    const TempFile out1("cli_card2_r1.pgm");
    const TempFile out2("cli_card2_r2.pgm");
    write_text(card.path, tiny_pgm());
    run_cli("corrupt " + card.path + " " + noisy.path +
            " --sigma 30 --seed 2");
    const RunResult r1 = run_cli("restore " + noisy.path + " " + out1.path);
    const RunResult r2 = run_cli("restore " + noisy.path + " " + out2.path);
    CHECK(r1.exit_code == 0);
    // Everything up to the echoed output path must match across runs.
    CHECK(r1.output.substr(0, r1.output.find("wrote ")) ==
          r2.output.substr(0, r2.output.find("wrote ")));
    CHECK(read_bytes(out1.path) == read_bytes(out2.path));

    double e_noisy = 0, e_restored = 0;
    std::istringstream lines(r1.output);
    std::string token;
    while (lines >> token) {
      if (token.rfind("energy_noisy=", 0) == 0)
        e_noisy = std::stod(token.substr(13));
      if (token.rfind("energy_restored=", 0) == 0)
        e_restored = std::stod(token.substr(16));
    }
    CHECK(e_noisy > 0);
    CHECK(e_restored < e_noisy);

    CHECK(run_cli("restore " + noisy.path + " " + out1.path + " --gamma 1.0")
              .exit_code == 2);
  }
}

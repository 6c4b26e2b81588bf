#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "random_params.hpp"
#include "wnv/cli_io.hpp"
#include "wnv/error.hpp"

using namespace wnv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wnv_test_cli_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& path) {
  std::vector<std::string> out;
  std::istringstream in(slurp(path));
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config is filled from defaults") {
  const RunConfig c = parse_config("[model]\ndelta = 0.3\n");
  CHECK(c.model.delta == 0.3);
  CHECK(c.numerics.dx == 0.02);
  CHECK(c.kernels_equal());
  CHECK(contains(c.defaulted, "numerics.dx"));
  CHECK(contains(c.defaulted, "model.a1"));
  CHECK(contains(c.defaulted, "kernel.kind"));
  CHECK_FALSE(contains(c.defaulted, "model.delta"));
  CHECK(emit_config(c).find("dt = auto") != std::string::npos);
}

TEST_CASE("invalid configs name the offending key") {
  CHECK_THROWS_AS(parse_config("[model]\ndelta = 1.5\n"), ParamError);
  CHECK(error_of("[model]\ndelta = 1.5\n").find("delta") != std::string::npos);
  CHECK_THROWS_AS(parse_config("[model]\nfoo = 1\n"), ConfigError);
  CHECK(error_of("[model]\nfoo = 1\n").find("model.foo") != std::string::npos);
  CHECK(error_of("[extras]\nx = 1\n").find("extras") != std::string::npos);
  CHECK(error_of("[numerics]\ndx = 0.o2\n").find("numerics.dx") != std::string::npos);
  CHECK(error_of("[numerics]\nperiods = 2.5\n").find("numerics.periods") != std::string::npos);
  CHECK(error_of("[kernel]\nkind = box\n").find("kernel.kind") != std::string::npos);
  CHECK(error_of("[contour]\ntie_k = yes\n").find("contour.tie_k") != std::string::npos);
  CHECK(error_of("[numerics]\ndx = -1\n").find("numerics.dx") != std::string::npos);
  CHECK_THROWS_AS(parse_config("[kernel]\nkind = tent\n[kernel1]\nkind = tent\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[kernel]\nshape = 0\n"), KernelError);
}

TEST_CASE("two kernels parse but eigenvalue commands reject them") {
  const RunConfig c =
      parse_config("[kernel1]\nkind = tent\nshape = 1\n[kernel2]\nkind = gaussian\nshape = 0.3\n");
  CHECK_FALSE(c.kernels_equal());
  CHECK(c.kernel2.kind == KernelKind::TruncatedGaussian);
  const fs::path dir = scratch_dir("mismatch");
  std::ostringstream out;
  CHECK_THROWS_AS(run_command("eigen", c, dir, out), KernelMismatchError);
  CHECK_THROWS_AS(run_command("lamP", c, dir, out), KernelMismatchError);
  RunConfig sim = c;
  sim.numerics.periods = 1;
  CHECK_NOTHROW(run_command("simulate", sim, dir, out));
  CHECK(data_lines(dir / "lambdaF.csv").size() == 1);  // column header only
}

TEST_CASE("emit and parse round-trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    RunConfig c;
    c.model = random_params(rng);
    c.model.d1 = 3 * u(rng);
    c.model.mu2 = 2 * u(rng);
    c.model.h0 = 0.1 + u(rng);
    c.kernel1 = {KernelKind::Tent, 0.1 + u(rng)};
    c.kernel2 = trial % 2 ? c.kernel1 : KernelSpec{KernelKind::TruncatedGaussian, 0.1 + u(rng)};
    c.numerics.dx = 0.001 + u(rng) / 10;
    c.numerics.dt = trial % 3 ? 0.0 : u(rng) / 10;
    c.numerics.scheme = trial % 2 ? TimeScheme::Euler : TimeScheme::SSPRK3;
    c.numerics.periods = trial;
    c.periodic.from = trial % 3 == 0 ? "below" : "ode";
    c.classify.search = trial % 2 ? "mu" : "sigma";
    c.classify.low = u(rng) / 7;
    c.sweep.delta = {u(rng), u(rng), 1.0 / 3.0};
    c.contour.tie_k = trial % 2;
    const RunConfig back = parse_config(emit_config(c));
    CHECK(back == c);
    CHECK(back.defaulted.empty());
  }
}

TEST_CASE("eigen command on the closed-form example") {
  const RunConfig c = parse_config("[model]\ndelta = 0.5\n");
  const fs::path dir = scratch_dir("eigen");
  std::ostringstream out;
  run_command("eigen", c, dir, out);
  const auto lines = data_lines(dir / "eigen.csv");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "lambda,lower,principal,case,m,Lambda");
  CHECK(lines[1].rfind("0.5,0.5,1,", 0) == 0);
  // Every file starts with the resolved configuration, which parses back.
  const std::string text = slurp(dir / "eigen.csv");
  CHECK(text.rfind("# wnv eigen\n# [model]\n", 0) == 0);
  CHECK(parse_config(text.substr(0, text.find("lambda,"))) == c);
  CHECK(fs::exists(dir / "eigenfunction.csv"));
}

TEST_CASE("simulate output is deterministic") {
  RunConfig c = parse_config("[model]\nb1 = 0.5\nb2 = 0.5\nk = 0.8\ndelta = 0.3\n[numerics]\ndx = 0.05\nperiods = 3\n");
  c.simulate.snapshot_every = 1;
  const fs::path a = scratch_dir("sim_a"), b = scratch_dir("sim_b");
  std::ostringstream out;
  run_command("simulate", c, a, out);
  run_command("simulate", c, b, out);
  for (const char* f : {"boundaries.csv", "norms.csv", "lambdaF.csv", "field_3.csv"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto rows = data_lines(a / "boundaries.csv");
  CHECK(rows.front() == "t,g,h");
  CHECK(data_lines(a / "lambdaF.csv").size() == 5);
  // 17 significant digits.
  const std::string first = rows[1];
  CHECK(first == "0,-1,1");
  CHECK(rows.back().find("3,-") == 0);
  CHECK(rows.back().size() > 30);
}

TEST_CASE("sweep rows follow the parameter order") {
  RunConfig c = parse_config(
      "[model]\nb2 = 0.5\nk = 0.8\nh0 = 0.25\n[numerics]\ndx = 0.05\n"
      "[sweep]\ndelta = 0.1, 0.5, 1\nb1 = 0.3, 0.5, 3\nmu = 1\nh0 = 0.25\n");
  const fs::path a = scratch_dir("sweep_a"), b = scratch_dir("sweep_b");
  std::ostringstream out;
  c.sweep.threads = 1;
  run_command("sweep", c, a, out);
  c.sweep.threads = 3;
  run_command("sweep", c, b, out);
  const auto rows = data_lines(a / "phase.csv");
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "delta,b1,mu,h0,verdict,rule");
  const std::vector<std::string> prefix{"0.10000000000000001,0.29999999999999999",
                                        "0.10000000000000001,0.5", "0.10000000000000001,3",
                                        "0.5,0.29999999999999999", "0.5,0.5", "0.5,3",
                                        "1,0.29999999999999999", "1,0.5", "1,3"};
  for (size_t i = 0; i < 9; ++i) CHECK(rows[i + 1].rfind(prefix[i] + ",", 0) == 0);
  CHECK(rows[9].find("Vanishing,delta_one") != std::string::npos);
  CHECK(data_lines(b / "phase.csv") == rows);
}

TEST_CASE("classify and contour outputs") {
  RunConfig c = parse_config("[model]\nb1 = 0.5\nb2 = 0.5\nk = 0.8\ndelta = 0\nh0 = 2\n");
  const fs::path dir = scratch_dir("classify");
  std::ostringstream out;
  run_command("classify", c, dir, out);
  const std::string json = slurp(dir / "outcome.json");
  CHECK(json.find("\"verdict\": \"Spreading\"") != std::string::npos);
  CHECK(json.find("\"rule\": \"lambda_P_nonpositive\"") != std::string::npos);
  CHECK(out.str().find("Spreading") != std::string::npos);

  c.contour.delta = {0.0, 0.5};
  c.contour.tie_k = true;
  run_command("contour", c, dir, out);
  const auto rows = data_lines(dir / "contour.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "delta,b1,b1_closed_form");
}

TEST_CASE("error classes map to distinct exit codes") {
  const std::vector<int> codes{exit_code_for(ConfigError("")),    exit_code_for(ParamError("")),
                               exit_code_for(KernelMismatchError("")), exit_code_for(NumericalError("")),
                               exit_code_for(IoError("")),         exit_code_for(StepSizeError(""))};
  for (size_t i = 0; i < codes.size(); ++i) {
    CHECK(codes[i] > 1);
    for (size_t j = 0; j < i; ++j) CHECK(codes[i] != codes[j]);
  }
  CHECK(exit_code_for(std::runtime_error("")) == 1);
  std::ostringstream out;
  CHECK_THROWS_AS(run_command("plot", RunConfig{}, scratch_dir("bad"), out), ConfigError);
}

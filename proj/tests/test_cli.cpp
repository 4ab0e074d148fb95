#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "rsc/cli.hpp"
#include "support.hpp"

using namespace rsc;
using namespace rsc::cli;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rsc_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("parse a solve command and resolve the automatic stepsize") {
  const RunConfig cfg = parse_config({"solve", "--oracle", "quad:m=20,n=50,seed=7", "--variant", "gd", "--h", "auto"});
  CHECK(cfg.command == Command::solve);
  CHECK(cfg.oracle_id == "quad:m=20,n=50,seed=7");
  CHECK(cfg.h == "auto");
  CHECK(cfg.seeds == std::vector<std::uint64_t>{0});

  const ObjectiveOracle q = make_oracle(cfg.oracle_id);
  const double R = ref::quad_constants(gaussian_matrix(20, 50, 7)).norm_sq;
  const double h = resolve_stepsize(cfg.h, q, GradientDescent{});
  CHECK(h == doctest::Approx(1.0 / (2.0 * R)).epsilon(1e-8));
  CHECK(resolve_stepsize("auto", q, Nesterov{}) == doctest::Approx(1.0 / R).epsilon(1e-8));
  CHECK(resolve_stepsize("0.01", q, GradientDescent{}) == 0.01);
  CHECK_THROWS_AS(resolve_stepsize("-1", q, GradientDescent{}), UsageError);
  CHECK(resolve_stepsize("auto", make_oracle("f3:beta=2"), GradientDescent{}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(resolve_stepsize("auto", make_oracle("f1"), GradientDescent{}), UsageError);
}

TEST_CASE("parse the binary recovery configuration") {
  const RunConfig cfg =
      parse_config({"recover", "--m", "256", "--n", "512", "--k", "25", "--signal", "pm_one", "--variant", "skip"});
  CHECK(cfg.command == Command::recover);
  CHECK(cfg.m == 256);
  CHECK(cfg.n == 512);
  CHECK(cfg.k == 25);
  CHECK(cfg.signal == "pm_one");
  CHECK(cfg.variant == "skip");
}

TEST_CASE("seed lists and windows") {
  const RunConfig cfg = parse_config({"rates", "--oracle", "f3", "--seed", "1,2,5", "--window", "10:40"});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 5});
  REQUIRE(cfg.window);
  CHECK(cfg.window->first == 10);
  CHECK(cfg.window->second == 40);
  CHECK_THROWS_AS(parse_config({"rates", "--oracle", "f3", "--window", "40"}), UsageError);
}

TEST_CASE("usage errors") {
  const Outcome empty = invoke({});
  CHECK(empty.code == 2);
  CHECK(empty.err.find("usage") != std::string::npos);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"solve", "--oracle", "f3", "--theorem", "thm2_linear"}).code == 2);
  CHECK(invoke({"solve"}).code == 2);
  CHECK_THROWS_AS(parse_config({"solve", "--oracle", "f3", "--bogus", "1"}), UsageError);
}

TEST_CASE("config files supply defaults that flags override") {
  const fs::path dir = scratch("config");
  {
    std::ofstream f(dir / "run.json");
    f << R"({"command": "solve", "oracle": "f3:beta=1", "iters": 7, "variant": "nesterov"})";
  }
  const RunConfig cfg = parse_config({"solve", "--config", (dir / "run.json").string(), "--iters", "9"});
  CHECK(cfg.oracle_id == "f3:beta=1");
  CHECK(cfg.variant == "nesterov");
  CHECK(cfg.iters == 9);

  {
    std::ofstream f(dir / "bad.json");
    f << R"({"oracle": "f3", "stepsize": 0.1})";
  }
  try {
    parse_config({"solve", "--config", (dir / "bad.json").string()});
    FAIL("unknown key accepted");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("stepsize") != std::string::npos);
  }
  {
    std::ofstream f(dir / "other.json");
    f << R"({"command": "verify"})";
  }
  CHECK_THROWS_AS(parse_config({"solve", "--config", (dir / "other.json").string(), "--oracle", "f3"}), UsageError);
}

TEST_CASE("oracle registry") {
  CHECK(make_oracle("f1").name() == "f1");
  CHECK(make_oracle("f3:beta=2.5").dim() == 1);
  CHECK(make_oracle("quad:m=4,n=9,seed=3").dim() == 9);
  CHECK(make_oracle("augl1:m=8,n=16,k=2,signal=pm_one,seed=1").dim() == 8);
  CHECK_THROWS_AS(make_oracle("f4"), std::invalid_argument);
  CHECK_THROWS_AS(make_oracle("quad:m=60,n=50,seed=1"), std::invalid_argument);
  CHECK_THROWS_AS(make_oracle("quad:m=4,n=9"), std::invalid_argument);

  const ObjectiveOracle q = make_oracle("quad:m=20,n=50,seed=2");
  const ref::QuadConstants c = ref::quad_constants(gaussian_matrix(20, 50, 2));
  const auto K = std::get<RestartFixed>(resolve_variant("restart:auto", q)).K;
  CHECK(K == static_cast<std::size_t>(std::ceil(std::sqrt(8.0 * std::numbers::e * c.norm_sq / c.lambda_min))));
  CHECK(std::get<RestartFixed>(resolve_variant("restart:12", q)).K == 12);
  CHECK_THROWS_AS(resolve_variant("restart:auto", make_oracle("f1")), std::invalid_argument);
}

TEST_CASE("verify on a conforming run") {
  const fs::path dir = scratch("verify");
  const Outcome r = invoke({"verify", "--oracle", "quad:m=20,n=50,seed=7", "--theorem", "thm2_linear", "--iters",
                            "500", "--seed", "0,1", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto reports = json_lines(slurp(dir / "reports.jsonl"));
  REQUIRE(reports.size() == 2);
  for (const auto& j : reports) {
    CHECK(j["pass"] == true);
    CHECK(j["theorem_id"] == "thm2_linear");
  }
  const auto config = nlohmann::json::parse(slurp(dir / "config.json"));
  CHECK(config["h_resolved"].get<double>() > 0.0);
  CHECK(fs::exists(dir / "trace_seed0.csv"));
  CHECK(fs::exists(dir / "trace_seed1.csv"));
}

TEST_CASE("verify exit codes") {
  const fs::path dir = scratch("verify_fail");
  // A short step contracts by 0.9 per iteration, slower than the proven factor.
  const Outcome slow = invoke({"verify", "--oracle", "f3:beta=1", "--theorem", "thm2_linear", "--h", "0.1", "--x0",
                               "5", "--iters", "50", "--out", dir.string()});
  CHECK(slow.code == 1);
  CHECK(json_lines(slow.out).back()["pass"] == false);

  // f1 has no known restricted Lipschitz constant.
  const Outcome bad = invoke({"verify", "--oracle", "f1", "--theorem", "thm2_linear", "--h", "0.1", "--out", dir.string()});
  CHECK(bad.code == 2);
  CHECK(json_lines(bad.err).at(0)["error"] == "invalid_argument");

  const Outcome wrong = invoke({"verify", "--oracle", "quad:m=20,n=50,seed=7", "--theorem", "thm6_restart", "--out",
                                dir.string()});
  CHECK(wrong.code == 2);
}

TEST_CASE("divergent stepsizes abort numerically") {
  const fs::path dir = scratch("diverge");
  const Outcome r = invoke({"solve", "--oracle", "quad:m=20,n=50,seed=7", "--h", "1", "--out", dir.string()});
  CHECK(r.code == 3);
  CHECK(json_lines(r.err).at(0)["error"] == "numeric");
}

TEST_CASE("appendix command") {
  const fs::path dir = scratch("appendix");
  const Outcome r = invoke({"appendix", "--R", "1", "--nu", "0.5", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto j = json_lines(r.out).at(0);
  CHECK(std::abs(j["min_value"].get<double>() - 0.75) <= 1e-6);
  CHECK(fs::exists(dir / "appendix.json"));
  CHECK(invoke({"appendix", "--R", "1", "--nu", "3", "--out", dir.string()}).code == 2);
}

TEST_CASE("rates on a synthetic geometric trace file") {
  const fs::path dir = scratch("rates");
  {
    std::ofstream f(dir / "geo.csv");
    f << "k,f,fgap,grad_norm,dist_to_sol,reset_event\n";
    for (int k = 0; k <= 40; ++k) {
      const double v = std::pow(0.5, k);
      f << k << ',' << format_double(v) << ',' << format_double(v) << ',' << format_double(v) << ",,none\n";
    }
  }
  const Outcome r = invoke({"rates", "--trace", (dir / "geo.csv").string(), "--out", dir.string()});
  CHECK(r.code == 0);
  const auto j = json_lines(r.out).at(0);
  CHECK(std::abs(j["fitted_factor"].get<double>() - 0.5) <= 1e-9);
  CHECK(j["r_squared"].get<double>() == doctest::Approx(1.0));
  CHECK(invoke({"rates", "--trace", (dir / "missing.csv").string(), "--out", dir.string()}).code == 2);
}

TEST_CASE("certify command") {
  const fs::path dir = scratch("certify");
  const Outcome r = invoke({"certify", "--oracle", "f3:beta=1", "--samples", "500", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto lines = json_lines(slurp(dir / "estimates.jsonl"));
  REQUIRE(lines.size() == 2);
  bool saw_nu = false;
  for (const auto& j : lines) {
    if (j["constant"] == "nu") {
      saw_nu = true;
      CHECK(std::abs(j["value"].get<double>() - 1.0) <= 1e-9);
    }
  }
  CHECK(saw_nu);
}

TEST_CASE("reruns produce byte-identical CSV") {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  const std::vector<std::string> base{"solve", "--oracle", "quad:m=20,n=50,seed=3", "--variant", "restart",
                                      "--iters", "300", "--svg"};
  std::vector<std::string> args_a = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  std::vector<std::string> args_b = base;
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  const std::string csv = slurp(a / "trace_seed0.csv");
  CHECK(csv.rfind("k,f,fgap,grad_norm,dist_to_sol,reset_event\n", 0) == 0);
  CHECK(csv == slurp(b / "trace_seed0.csv"));
  const std::string svg = slurp(a / "trace_seed0.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  for (const auto& entry : fs::directory_iterator(a)) {
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
  }
}

TEST_CASE("recover command") {
  const fs::path dir = scratch("recover");
  const Outcome r = invoke({"recover", "--m", "64", "--n", "128", "--k", "5", "--signal", "pm_one", "--variant",
                            "skip", "--seed", "0,1", "--iters", "20000", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto lines = json_lines(slurp(dir / "recovery.jsonl"));
  REQUIRE(lines.size() == 2);
  CHECK(fs::exists(dir / "recovery_seed0_skip.csv"));
  const Outcome starved = invoke({"recover", "--m", "64", "--n", "128", "--k", "5", "--variant", "gd", "--iters",
                                  "3", "--out", dir.string()});
  CHECK(starved.code == 1);
}

TEST_CASE("atomic writes and charts") {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "x.txt", "hello\n");
  write_file_atomic(dir / "x.txt", "again\n");
  CHECK(slurp(dir / "x.txt") == "again\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);

  const std::string svg = render_log_chart("t", "y", {{"a", {0, 1, 2, 3}, {1.0, 0.1, 0.0, 0.001}}});
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}

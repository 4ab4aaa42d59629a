#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bmoalab/cli.hpp"
#include "bmoalab/core.hpp"
#include "bmoalab/report.hpp"

using namespace bmoalab;
using cli::ConfigError;
using cli::RunOutput;
using cli::run_config;

namespace {

Json parse(const char* text) { return Json::parse(text); }

std::filesystem::path temp_dir(const std::string& leaf) {
  const auto dir = std::filesystem::temp_directory_path() / "bmoalab_tests" / leaf;
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("norm command computes catalog norms with full echo", "[cli]") {
  const RunOutput out = run_config(
      "norm", parse(R"json({"command": "norm", "function": "const(3)", "p": 2.0})json"));
  REQUIRE(out.exit_code == 0);
  CHECK(out.report.results.at("value").get<double>() ==
        Catch::Approx(3.0).margin(1e-12));

  // Every default is written into the echo.
  const Json& echo = out.report.config;
  CHECK(echo.at("kind") == "bmoa-norm");
  CHECK(echo.at("grid").at("radial") == 512);
  CHECK(echo.at("grid").at("angular") == 1024);
  CHECK(echo.at("grid").at("grading").get<double>() == 3.0);
  CHECK(echo.at("search").at("k_max") == 14);
  CHECK(echo.at("rng_seed") == 0);
  CHECK(out.report.to_json().at("tool_version") == kToolVersion);
}

TEST_CASE("norm command agrees with the library call", "[cli]") {
  const char* cfg = R"json({
    "command": "norm", "function": "comp(monomial(2), mobius(0.5))",
    "p": 2.0, "kind": "dirichlet",
    "grid": {"radial": 96, "angular": 192}})json";
  const RunOutput out = run_config("norm", parse(cfg));
  REQUIRE(out.exit_code == 0);
  const AnalyticFn f =
      compose(make_monomial(2), make_mobius(Complex(0.5, 0.0)));
  const NormEstimate direct =
      dirichlet_norm(f, SpaceParam{2.0}, GridSpec{96, 192, 3.0, 1.0 - 0x1p-20});
  CHECK(out.report.results.at("value").get<double>() ==
        Catch::Approx(direct.value).margin(1e-14));
}

TEST_CASE("schema violations are rejected before any computation", "[cli]") {
  // Missing required field.
  CHECK_THROWS_AS(
      run_config("norm", parse(R"json({"command": "norm", "function": "z"})json")),
      ConfigError);
  // Unknown top-level field.
  CHECK_THROWS_AS(
      run_config("norm", parse(R"json({"command": "norm", "function": "z",
                                   "p": 2.0, "bogus": 1})json")),
      ConfigError);
  // Unknown nested field.
  CHECK_THROWS_AS(
      run_config("norm", parse(R"json({"command": "norm", "function": "z",
                                   "p": 2.0, "grid": {"radial": 64,
                                   "extra": true}})json")),
      ConfigError);
  // Command mismatch between config and invocation.
  CHECK_THROWS_AS(
      run_config("vmoa", parse(R"json({"command": "norm", "function": "z",
                                   "p": 2.0})json")),
      ConfigError);
  // Malformed expression and out-of-range catalog parameter.
  CHECK_THROWS_AS(
      run_config("norm", parse(R"json({"command": "norm", "function": "z +",
                                   "p": 2.0})json")),
      ConfigError);
  CHECK_THROWS_AS(
      run_config("norm",
                 parse(R"json({"command": "norm", "function": "mobius(1.5)",
                           "p": 2.0})json")),
      ConfigError);
  // Bad complex field shape and bad closed_form id.
  CHECK_THROWS_AS(
      run_config("semigroup-flow",
                 parse(R"json({"command": "semigroup-flow", "generator": "-z",
                           "dw_point": [0], "z0": [0.5, 0]})json")),
      ConfigError);
  CHECK_THROWS_AS(
      run_config("semigroup-flow",
                 parse(R"json({"command": "semigroup-flow", "generator": "-z",
                           "dw_point": [0, 0], "closed_form": "spiral",
                           "z0": [0.5, 0]})json")),
      ConfigError);
  // Unknown suite id.
  CHECK_THROWS_AS(
      run_config("suite",
                 parse(R"json({"command": "suite", "suite": "nope"})json")),
      ConfigError);
}

TEST_CASE("semigroup-flow reports closed-form agreement", "[cli]") {
  const char* cfg = R"json({
    "command": "semigroup-flow", "generator": "-z", "dw_point": [0, 0],
    "closed_form": "dilation", "z0": [0.5, 0.0], "t_values": [0.5, 1.0]})json";
  const RunOutput out = run_config("semigroup-flow", parse(cfg));
  REQUIRE(out.exit_code == 0);
  const Json& flows = out.report.results.at("flows");
  REQUIRE(flows.size() == 2);
  for (const Json& f : flows) {
    CHECK(f.at("closed_form_error").get<double>() < 1e-9);
  }
  CHECK(out.report.results.at("law_residual").get<double>() < 1e-8);
  CHECK(out.report.config.at("tol").get<double>() == 1e-9);
}

TEST_CASE("mismatched closed form is a computation error", "[cli]") {
  // G = -z integrates to a dilation; claiming rotation must fail at run
  // time with the error embedded in the report (exit 3 semantics).
  const char* cfg = R"json({
    "command": "semigroup-flow", "generator": "-z", "dw_point": [0, 0],
    "closed_form": "rotation", "z0": [0.5, 0.0]})json";
  const RunOutput out = run_config("semigroup-flow", parse(cfg));
  CHECK(out.exit_code == 3);
  CHECK(out.report.results.contains("error"));
}

TEST_CASE("condition command marks the pLog/cond3 gap", "[cli]") {
  const char* cfg = R"json({
    "command": "condition", "generator": "pow1m(0.8)", "p": 1.5,
    "boxes": {"centers": [0.0], "k_min": 1, "k_max": 12},
    "grid": {"radial": 128, "angular": 256}})json";
  const RunOutput out = run_config("condition", parse(cfg));
  REQUIRE(out.exit_code == 0);
  const Json& res = out.report.results;
  CHECK(res.at("cond3").at("worst").at("verdict") == "vanishes");
  CHECK(res.at("plog").at("worst").at("verdict") != "vanishes");
  CHECK(res.at("equality_verdict") == "theory-undetermined");
  REQUIRE_FALSE(out.report.warnings.empty());

  // The half-plane generator is decisively not-equal.
  const char* cfg2 = R"json({
    "command": "condition", "generator": "poly(1, -1)", "dw_point": [1, 0],
    "p": 1.5, "boxes": {"centers": [0.0], "k_min": 1, "k_max": 12},
    "grid": {"radial": 128, "angular": 256}})json";
  const RunOutput out2 = run_config("condition", parse(cfg2));
  CHECK(out2.report.results.at("equality_verdict") == "not-equal");
  CHECK_FALSE(out2.report.results.at("cond2").at("bounded").get<bool>());

  // Dilation: pLog vanishes, spaces coincide.
  const char* cfg3 = R"json({
    "command": "condition", "generator": "-z", "p": 1.5,
    "boxes": {"centers": [0.0, 3.141592653589793], "k_min": 1, "k_max": 12},
    "grid": {"radial": 128, "angular": 256}})json";
  const RunOutput out3 = run_config("condition", parse(cfg3));
  CHECK(out3.report.results.at("equality_verdict") == "equal");
}

TEST_CASE("volterra command emits verdicts and witness profiles", "[cli]") {
  const char* cfg = R"json({
    "command": "volterra", "symbol": "logrecip(1)", "p_from": 1.5,
    "p_to": 1.5, "boxes": {"centers": [0.0], "k_min": 1, "k_max": 10},
    "grid": {"radial": 96, "angular": 192},
    "search": {"rays": 8, "k_max": 10, "refine_top": 2, "simplex_iters": 20},
    "witness_k_max": 8})json";
  const RunOutput out = run_config("volterra", parse(cfg));
  REQUIRE(out.exit_code == 0);
  const Json& res = out.report.results;
  CHECK_FALSE(res.at("bounded").get<bool>());
  CHECK_FALSE(res.at("compact").get<bool>());
  CHECK(res.at("lower_bound").at("unbounded").get<bool>());

  REQUIRE(out.csvs.size() == 2);
  CHECK(out.csvs[0].first == "profile.csv");
  CHECK(out.csvs[0].second.size() == 10);  // one center, k = 1..10
  CHECK(out.csvs[0].second.front().k == 1);
  CHECK(out.csvs[0].second.front().param ==
        Catch::Approx(0.5).margin(1e-15));
  CHECK(out.csvs[1].first == "witness_profile.csv");
  CHECK(out.csvs[1].second.size() == 8);
}

TEST_CASE("gamma command ties the symbol to the generator verdicts", "[cli]") {
  const char* cfg = R"json({
    "command": "gamma", "generator": "-z", "dw_point": [0, 0],
    "closed_form": "dilation", "p": 1.5,
    "boxes": {"centers": [0.0, 3.141592653589793], "k_min": 1, "k_max": 10},
    "grid": {"radial": 96, "angular": 192}})json";
  const RunOutput out = run_config("gamma", parse(cfg));
  REQUIRE(out.exit_code == 0);
  const Json& res = out.report.results;
  CHECK(res.at("case") == "interior");
  CHECK(res.at("gamma_compact").get<bool>());
  CHECK(res.at("plog_vanishes").get<bool>());
}

TEST_CASE("results are bitwise identical across thread counts", "[cli]") {
  const char* cfg = R"json({
    "command": "vmoa", "function": "monomial(2)", "p": 2.0,
    "grid": {"radial": 96, "angular": 192}, "rays": 4,
    "k_min": 2, "k_max": 8})json";
  parallel::set_threads(1);
  const RunOutput a = run_config("vmoa", parse(cfg));
  parallel::set_threads(4);
  const RunOutput b = run_config("vmoa", parse(cfg));
  parallel::set_threads(1);
  CHECK(a.report.results.dump() == b.report.results.dump());
  REQUIRE(a.csvs.size() == 1);
  REQUIRE(b.csvs.size() == 1);
  REQUIRE(a.csvs[0].second.size() == b.csvs[0].second.size());
  for (std::size_t i = 0; i < a.csvs[0].second.size(); ++i) {
    CHECK(a.csvs[0].second[i].value == b.csvs[0].second[i].value);
  }
}

TEST_CASE("file-level driver writes reports and respects exit codes",
          "[cli]") {
  const auto dir = temp_dir("driver");
  const auto cfg_path = dir / "config.json";
  {
    std::ofstream out(cfg_path);
    out << R"json({"command": "norm", "function": "z", "p": 2.0,
               "grid": {"radial": 64, "angular": 128},
               "search": {"rays": 8, "k_max": 8, "refine_top": 2,
               "simplex_iters": 10}})json";
  }
  const auto out_dir = dir / "out";
  std::string error;
  const int code = cli::run_to_files("norm", cfg_path, out_dir, &error);
  REQUIRE(code == 0);
  REQUIRE(std::filesystem::exists(out_dir / "report.json"));
  // norm emits no profile.
  CHECK_FALSE(std::filesystem::exists(out_dir / "profile.csv"));

  std::ifstream in(out_dir / "report.json");
  const Json report = Json::parse(in);
  CHECK(report.at("results").at("value").get<double>() ==
        Catch::Approx(std::sqrt(0.5)).margin(1e-3));

  // Schema error: exit 2 and no report written.
  const auto bad_path = dir / "bad.json";
  {
    std::ofstream out(bad_path);
    out << R"json({"command": "norm", "function": "z"})json";
  }
  const auto bad_out = dir / "bad_out";
  const int bad_code = cli::run_to_files("norm", bad_path, bad_out, &error);
  CHECK(bad_code == 2);
  CHECK_FALSE(std::filesystem::exists(bad_out / "report.json"));
  CHECK_FALSE(error.empty());

  // Unreadable config: exit 2.
  CHECK(cli::run_to_files("norm", dir / "missing.json", bad_out, &error) == 2);
}

TEST_CASE("csv profiles use the fixed header and scientific format",
          "[cli]") {
  CHECK(format_sci(0.5) == "5.0000000000000000e-01");
  CHECK(format_sci(0.0) == "0.0000000000000000e+00");
  CHECK(format_sci(-1.0 / 3.0) == "-3.3333333333333331e-01");

  const auto dir = temp_dir("csv");
  const auto path = dir / "profile.csv";
  write_profile_csv(path, {ProfileCsvRow{0.0, 1, 0.5, 2.0},
                           ProfileCsvRow{kPi, 2, 0.25, 4.0}});
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.rfind("center_angle,k,param,value\r\n", 0) == 0);
  CHECK(text.find(",1.0000000000000000e+00,") ==
        std::string::npos);  // k stays an integer column
  CHECK(text.find(",1,5.0000000000000000e-01,2.0000000000000000e+00\r\n") !=
        std::string::npos);
}

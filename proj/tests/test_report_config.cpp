#include "csmult/config.hpp"
#include "csmult/report.hpp"
#include "csmult/runner.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using csmult::CheckRecord;
using csmult::ordered_json;
using csmult::RunReport;
using csmult::Verdict;

namespace {

// Config texture shared by the context tests: small grids, tiny family.
const char* kConfigText = R"json({
  "seed": 11,
  "domain": {"coeffs": [[1.0, 0.0]], "n_check": 128},
  "functions": {
    "f_id": {"kind": "rational", "poly": [[0, 0], [1, 0]]},
    "f_two": {"kind": "rational", "poly": [[2, 0]]}
  },
  "measures": {
    "delta0": {"atoms": [{"theta": 0.0, "w": [1.0, 0.0]}]}
  },
  "family": {"pole_radii": [0.0], "poles_per_circle": 1, "max_order": 2,
             "random_combos": 0, "norm_grid_n": 128},
  "grids": {"n": 256, "n_eta": 16, "n_zeta": 256, "n_zeta_max": 65536,
            "r_schedule": [0.5, 0.9], "interior_grid": [[0, 0], [0.3, 0]]},
  "tolerances": {"lambda_tol": 1e-7, "bracket_tol": 1e-7, "slack_tol": 1e-6,
                 "theorem2_tol": 1e-6, "quad_tol": 1e-11}
})json";

std::string strip_wall_column(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out += line.substr(0, pos);
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("csv layout is stable", "[report]") {
  RunReport rep;
  CheckRecord a;
  a.check = "lambda";
  a.name = "f";
  a.value = 1.5;
  a.verdict = Verdict::pass;
  rep.checks.push_back(a);

  CheckRecord b;
  b.check = "theorem1";
  b.name = "g.slack";
  b.value = 8.000000123456;
  b.expected = 8.0;
  b.tol = 1e-6;
  b.verdict = Verdict::fail;
  b.wall_time_ms = 12.25;
  rep.checks.push_back(b);

  CheckRecord c;
  c.check = "vinogradov";
  c.name = "f.lambda";
  c.value = 8.0;
  c.verdict = Verdict::not_asserted;
  rep.checks.push_back(c);

  REQUIRE(csmult::to_csv(rep) ==
          "check,name,value,expected,tol,verdict,wall_time_ms\n"
          "lambda,f,1.5,,,pass,0\n"
          "theorem1,g.slack,8.00000012346,8,1e-06,fail,12.25\n"
          "vinogradov,f.lambda,8,,,not-asserted,0\n");

  const ordered_json j = csmult::to_json(rep);
  REQUIRE(j["checks"].size() == 3);
  REQUIRE(j["checks"][0]["verdict"] == "pass");
  REQUIRE(j["checks"][1]["expected"] == 8.0);
  REQUIRE_FALSE(j["checks"][0].contains("expected"));
  REQUIRE(j["any_fail"] == true);
  REQUIRE(rep.any_fail());
}

TEST_CASE("report files are written", "[report]") {
  RunReport rep;
  CheckRecord a;
  a.check = "domain-info";
  a.name = "s0";
  a.value = 6.28;
  a.verdict = Verdict::pass;
  rep.checks.push_back(a);

  const auto dir = std::filesystem::temp_directory_path() / "csmult_report_test";
  std::filesystem::remove_all(dir);
  csmult::write_report_files(rep, dir);
  REQUIRE(std::filesystem::exists(dir / "report.json"));
  REQUIRE(std::filesystem::exists(dir / "summary.csv"));

  std::ifstream cs(dir / "summary.csv");
  std::string header;
  std::getline(cs, header);
  REQUIRE(header == "check,name,value,expected,tol,verdict,wall_time_ms");
  std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing round trip", "[config]") {
  const auto cfg = csmult::parse_config(ordered_json::parse(kConfigText));
  REQUIRE(cfg.seed == 11);
  REQUIRE(cfg.domain.coeffs.size() == 1);
  REQUIRE(cfg.domain.n_check == 128);
  REQUIRE(cfg.functions.size() == 2);
  REQUIRE_NOTHROW(cfg.function("f_id"));
  REQUIRE_THROWS_AS(cfg.function("nope"), std::invalid_argument);
  REQUIRE_NOTHROW(cfg.measure_spec("delta0"));
  REQUIRE_THROWS_AS(cfg.measure_spec("nope"), std::invalid_argument);
  REQUIRE(cfg.family.seed == 11);  // inherited from the top-level seed
  REQUIRE(cfg.family.pole_radii == std::vector<double>{0.0});
  REQUIRE(cfg.grids.r_schedule == std::vector<double>{0.5, 0.9});
  REQUIRE(cfg.grids.interior_grid.size() == 2);
  REQUIRE(cfg.tolerances.lambda_tol == 1e-7);
}

TEST_CASE("config rejects malformed input", "[config]") {
  using Catch::Matchers::ContainsSubstring;
  REQUIRE_THROWS_WITH(csmult::parse_config(ordered_json::parse(R"({"seed": 1})")),
                      ContainsSubstring("domain.coeffs"));
  REQUIRE_THROWS_AS(csmult::parse_config(ordered_json::parse("[1, 2]")), std::invalid_argument);

  auto bad_tol = ordered_json::parse(kConfigText);
  bad_tol["tolerances"]["lambda_tol"] = 0.0;
  REQUIRE_THROWS_WITH(csmult::parse_config(bad_tol), ContainsSubstring("tolerances"));

  auto bad_grid = ordered_json::parse(kConfigText);
  bad_grid["grids"]["n"] = 4;
  REQUIRE_THROWS_WITH(csmult::parse_config(bad_grid), ContainsSubstring("grid"));

  REQUIRE_THROWS_WITH(
      csmult::parse_function(ordered_json::parse(R"({"kind": "fourier"})"), "functions.x"),
      ContainsSubstring("unknown kind"));
  REQUIRE_THROWS_WITH(
      csmult::parse_function(ordered_json::parse(R"({"kind": "diffquot", "eta_theta": 1})"),
                             "functions.x"),
      ContainsSubstring("base"));
  REQUIRE_THROWS_WITH(csmult::parse_complex(ordered_json::parse("[1]"), "w"),
                      ContainsSubstring("[re, im]"));
}

TEST_CASE("measure specs build against a domain", "[config]") {
  using Catch::Matchers::ContainsSubstring;
  const csmult::ConformalDomain dom = csmult::build_domain({{1.0, 0.0}});
  const auto mu = csmult::build_measure(
      dom,
      ordered_json::parse(
          R"({"atoms": [{"theta": 0.5, "w": [0, 2]}],
              "density": {"flavor": "complex-line",
                          "fn": {"kind": "rational", "poly": [[0, -0.159154943091895]]}}})"),
      "measures.m");
  REQUIRE(mu.atoms().size() == 1);
  REQUIRE(mu.density().has_value());
  REQUIRE(mu.variation() == Catch::Approx(3.0).margin(1e-9));

  REQUIRE_THROWS_WITH(
      csmult::build_measure(dom,
                            ordered_json::parse(R"({"density": {"flavor": "radial",
                              "fn": {"kind": "rational", "poly": [[1, 0]]}}})"),
                            "measures.m"),
      ContainsSubstring("flavor"));
  REQUIRE_THROWS_WITH(
      csmult::build_measure(dom, ordered_json::parse(R"({"density": {"flavor": "arclength"}})"),
                            "measures.m"),
      ContainsSubstring("fn"));
}

TEST_CASE("config file loading", "[config]") {
  const auto path = std::filesystem::temp_directory_path() / "csmult_cfg_test.json";
  {
    std::ofstream out(path);
    out << kConfigText;
  }
  const auto cfg = csmult::load_config(path.string());
  REQUIRE(cfg.functions.size() == 2);
  std::filesystem::remove(path);

  REQUIRE_THROWS_AS(csmult::load_config("/nonexistent/csmult.json"), std::invalid_argument);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  REQUIRE_THROWS_AS(csmult::load_config(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST_CASE("run context materializes and rejects bad functions", "[runner]") {
  using Catch::Matchers::ContainsSubstring;
  const auto cfg = csmult::parse_config(ordered_json::parse(kConfigText));
  const auto ctx = csmult::RunContext::build(cfg);
  REQUIRE(ctx.measures.size() == 1);
  REQUIRE(ctx.family.size() == 2);
  REQUIRE_NOTHROW(ctx.measure("delta0"));
  REQUIRE_THROWS_AS(ctx.measure("nope"), std::invalid_argument);

  auto bad = ordered_json::parse(kConfigText);
  bad["functions"]["sneaky"] =
      ordered_json::parse(R"({"kind": "rational", "poles": [{"a": [0.5, 0], "order": 1}]})");
  REQUIRE_THROWS_WITH(csmult::RunContext::build(csmult::parse_config(bad)),
                      ContainsSubstring("sneaky"));
}

TEST_CASE("runner output is deterministic", "[runner]") {
  const auto cfg = csmult::parse_config(ordered_json::parse(kConfigText));
  const auto ctx1 = csmult::RunContext::build(cfg);
  const auto ctx2 = csmult::RunContext::build(cfg);

  RunReport rep1, rep2;
  rep1.checks = csmult::run_lambda(ctx1, "f_id");
  rep2.checks = csmult::run_lambda(ctx2, "f_id");
  auto knorm1 = csmult::run_knorm(ctx1, "delta0");
  auto knorm2 = csmult::run_knorm(ctx2, "delta0");
  rep1.checks.insert(rep1.checks.end(), knorm1.begin(), knorm1.end());
  rep2.checks.insert(rep2.checks.end(), knorm2.begin(), knorm2.end());

  REQUIRE(strip_wall_column(csmult::to_csv(rep1)) == strip_wall_column(csmult::to_csv(rep2)));
  REQUIRE_FALSE(rep1.any_fail());
}

TEST_CASE("runner records carry verdicts and details", "[runner]") {
  const auto cfg = csmult::parse_config(ordered_json::parse(kConfigText));
  const auto ctx = csmult::RunContext::build(cfg);

  const auto info = csmult::run_domain_info(ctx);
  REQUIRE(info.size() == 2);
  REQUIRE(info[0].name == "s0");
  REQUIRE(info[0].value == Catch::Approx(csmult::two_pi).margin(1e-10));
  REQUIRE(info[1].name == "chord_arc");
  REQUIRE(info[1].verdict == Verdict::pass);

  const auto t1 = csmult::run_theorem1(ctx, "f_two");
  REQUIRE(t1.size() == 3);
  REQUIRE(t1[2].name == "f_two.slack");
  REQUIRE(t1[2].expected.has_value());
  REQUIRE(t1[2].verdict == Verdict::pass);
  REQUIRE(t1[1].details["lambda_converged"] == true);

  const auto vin = csmult::run_vinogradov(ctx, "f_id");
  REQUIRE(vin.size() == 2);
  REQUIRE(vin[0].verdict == Verdict::not_asserted);
  REQUIRE(vin[1].value == Catch::Approx(1.0).margin(1e-10));
}

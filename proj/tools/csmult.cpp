// Command-line front end: every subcommand loads a JSON experiment config,
// runs the requested computation, writes report.json and summary.csv into the
// output directory, and exits 0 only when no check failed (2 on bad usage or
// config).

#include <CLI11.hpp>

#include "csmult/csmult.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

csmult::ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  csmult::ordered_json j;
  in >> j;
  return j;
}

void print_records(const std::vector<csmult::CheckRecord>& records) {
  for (const csmult::CheckRecord& r : records) {
    std::printf("%-12s %-28s value=%-18s verdict=%s\n", r.check.c_str(), r.name.c_str(),
                csmult::format_double(r.value).c_str(), csmult::to_string(r.verdict));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy-Stieltjes transform and multiplier toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path = "configs/default.json";
  std::string out_dir = "out";
  std::string manifest_path = "configs/acceptance.json";
  int n_override = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "experiment config JSON");
  app.add_option("--out", out_dir, "output directory for report.json / summary.csv");
  app.add_option("--n-override", n_override, "override the main grid size");
  app.add_flag("--quiet", quiet, "suppress console output");

  std::string fn_name, measure_name;
  double p_value = 2.0;

  CLI::App* cmd_domain = app.add_subcommand("domain-info", "boundary length, chord-arc constant");
  CLI::App* cmd_lambda = app.add_subcommand("lambda", "Havin functional of a named function");
  cmd_lambda->add_option("fn", fn_name, "function name from the config")->required();
  CLI::App* cmd_knorm = app.add_subcommand("knorm", "duality bracket for a named measure");
  cmd_knorm->add_option("measure", measure_name, "measure name from the config")->required();
  CLI::App* cmd_mult = app.add_subcommand("mult-bound", "certified multiplier lower bound");
  cmd_mult->add_option("fn", fn_name, "function name from the config")->required();
  CLI::App* cmd_t1 = app.add_subcommand("theorem1", "multiplier upper bound check");
  cmd_t1->add_option("fn", fn_name, "function name from the config")->required();
  CLI::App* cmd_t2 = app.add_subcommand("theorem2", "smooth-curve bound check");
  cmd_t2->add_option("fn", fn_name, "function name from the config")->required();
  cmd_t2->add_option("--p", p_value, "exponent p > 1");
  CLI::App* cmd_vino = app.add_subcommand("vinogradov", "p = 1 probe on the identity disc");
  cmd_vino->add_option("fn", fn_name, "function name from the config")->required();
  CLI::App* cmd_verify = app.add_subcommand("verify", "run the full acceptance battery");
  cmd_verify->add_option("--manifest", manifest_path, "acceptance manifest JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    csmult::ExperimentConfig cfg = csmult::load_config(config_path);
    if (n_override > 0) cfg.grids.n = n_override;

    csmult::RunReport report;
    report.config_echo = cfg.echo;

    if (cmd_verify->parsed()) {
      const csmult::ordered_json manifest = load_json(manifest_path);
      report = csmult::run_acceptance(cfg, manifest);
      if (!quiet) csmult::print_acceptance_summary(report, stdout);
    } else {
      const csmult::RunContext ctx = csmult::RunContext::build(cfg);
      std::vector<csmult::CheckRecord> records;
      if (cmd_domain->parsed()) records = csmult::run_domain_info(ctx);
      else if (cmd_lambda->parsed()) records = csmult::run_lambda(ctx, fn_name);
      else if (cmd_knorm->parsed()) records = csmult::run_knorm(ctx, measure_name);
      else if (cmd_mult->parsed()) records = csmult::run_mult_bound(ctx, fn_name);
      else if (cmd_t1->parsed()) records = csmult::run_theorem1(ctx, fn_name);
      else if (cmd_t2->parsed()) records = csmult::run_theorem2(ctx, fn_name, p_value);
      else if (cmd_vino->parsed()) records = csmult::run_vinogradov(ctx, fn_name);
      report.checks = std::move(records);
      if (!quiet) print_records(report.checks);
    }

    csmult::write_report_files(report, out_dir);
    if (!quiet)
      std::printf("report written to %s (report.json, summary.csv)\n", out_dir.c_str());
    return report.any_fail() ? 1 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "csmult: error: %s\n", e.what());
    return 2;
  }
}

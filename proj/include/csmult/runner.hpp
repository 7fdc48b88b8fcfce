#pragma once

#include "csmult/config.hpp"
#include "csmult/multiplier.hpp"
#include "csmult/report.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csmult {

/// Config materialized against one domain: the domain itself, validated
/// functions, constructed measures and the pairing test family.
struct RunContext {
  ExperimentConfig cfg;
  ConformalDomain domain;
  std::vector<std::pair<std::string, BoundaryMeasure>> measures;
  TestFunctionFamily family;

  static RunContext build(const ExperimentConfig& cfg) { return build(cfg, cfg.domain); }

  static RunContext build(const ExperimentConfig& cfg, const DomainSpec& dspec) {
    ConformalDomain dom = build_domain(dspec.coeffs, dspec.n_check);
    for (const auto& [name, f] : cfg.functions) {
      try {
        f.validate_interior(dom);
      } catch (const std::exception& e) {
        throw std::invalid_argument("config: function '" + name + "': " + e.what());
      }
    }
    std::vector<std::pair<std::string, BoundaryMeasure>> measures;
    for (const auto& [name, spec] : cfg.measure_specs)
      measures.emplace_back(name, build_measure(dom, spec, "measures." + name));
    TestFunctionFamily family = make_test_family(dom, cfg.family);
    return RunContext{cfg, std::move(dom), std::move(measures), std::move(family)};
  }

  const BoundaryMeasure& measure(const std::string& name) const {
    for (const auto& [n, m] : measures)
      if (n == name) return m;
    throw std::invalid_argument("config: unknown measure '" + name + "'");
  }

  Theorem1Params theorem1_params() const {
    Theorem1Params p;
    p.n = cfg.grids.n;
    p.r = cfg.grids.r_schedule.empty() ? 0.9 : cfg.grids.r_schedule.front();
    p.n_eta = cfg.grids.n_eta;
    p.n_zeta0 = cfg.grids.n_zeta;
    p.lambda_tol = cfg.tolerances.lambda_tol;
    p.slack_tol = cfg.tolerances.slack_tol;
    p.lambda_opts.n_zeta_max = cfg.grids.n_zeta_max;
    return p;
  }

  Theorem2Params theorem2_params() const {
    Theorem2Params p;
    p.r_schedule = cfg.grids.r_schedule;
    p.quad_tol = cfg.tolerances.quad_tol;
    p.n_eta = cfg.grids.n_eta;
    p.n_zeta0 = cfg.grids.n_zeta;
    p.lambda_tol = cfg.tolerances.lambda_tol;
    p.tol = cfg.tolerances.theorem2_tol;
    p.lambda_opts.n_zeta_max = cfg.grids.n_zeta_max;
    return p;
  }
};

namespace detail {

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline std::vector<CheckRecord> run_domain_info(const RunContext& ctx) {
  std::vector<CheckRecord> out;
  detail::StopWatch sw;
  CheckRecord s0;
  s0.check = "domain-info";
  s0.name = "s0";
  s0.value = ctx.domain.s0();
  s0.verdict = Verdict::pass;
  s0.details["diameter"] = ctx.domain.diameter();
  s0.details["n_check"] = ctx.domain.n_check();
  s0.wall_time_ms = sw.ms();
  out.push_back(std::move(s0));

  detail::StopWatch sw2;
  CheckRecord c0;
  c0.check = "domain-info";
  c0.name = "chord_arc";
  c0.value = ctx.domain.chord_arc();
  c0.verdict = ctx.domain.chord_arc() > 0.0 ? Verdict::pass : Verdict::fail;
  c0.wall_time_ms = sw2.ms();
  out.push_back(std::move(c0));
  return out;
}

inline std::vector<CheckRecord> run_lambda(const RunContext& ctx, const std::string& fn) {
  const AnalyticFunction& f = ctx.cfg.function(fn);
  detail::StopWatch sw;
  LambdaOptions opts;
  opts.n_zeta_max = ctx.cfg.grids.n_zeta_max;
  const LambdaReport rep = havin_lambda(ctx.domain, f, ctx.cfg.grids.n_eta, ctx.cfg.grids.n_zeta,
                                        ctx.cfg.tolerances.lambda_tol, opts);
  CheckRecord r;
  r.check = "lambda";
  r.name = fn;
  r.value = rep.lambda;
  r.verdict = rep.converged ? Verdict::pass : Verdict::fail;
  r.wall_time_ms = sw.ms();
  r.details["argmax_theta"] = rep.argmax_theta;
  r.details["n_eta"] = rep.n_eta;
  r.details["n_zeta"] = rep.n_zeta;
  r.details["est_error"] = rep.est_error;
  r.details["converged"] = rep.converged;
  return {r};
}

inline std::vector<CheckRecord> run_knorm(const RunContext& ctx, const std::string& measure) {
  const BoundaryMeasure& mu = ctx.measure(measure);
  detail::StopWatch sw;
  const KNormBracket b = knorm_bracket(ctx.domain, mu, ctx.family, ctx.cfg.grids.r_schedule,
                                       ctx.cfg.grids.n, ctx.cfg.tolerances.bracket_tol);
  CheckRecord lo;
  lo.check = "knorm";
  lo.name = measure + ".lower";
  lo.value = b.lower;
  lo.verdict = Verdict::pass;
  lo.wall_time_ms = sw.ms();
  lo.details["witness"] =
      b.witness >= 0 ? ctx.family.members()[static_cast<std::size_t>(b.witness)].label : "";
  lo.details["r_final"] = b.r_final;

  CheckRecord hi;
  hi.check = "knorm";
  hi.name = measure + ".upper";
  hi.value = b.upper;
  hi.verdict = b.lower <= b.upper + ctx.cfg.tolerances.bracket_tol ? Verdict::pass : Verdict::fail;
  hi.wall_time_ms = 0.0;
  return {lo, hi};
}

inline std::vector<CheckRecord> run_mult_bound(const RunContext& ctx, const std::string& fn) {
  const AnalyticFunction& f = ctx.cfg.function(fn);
  detail::StopWatch sw;
  const double r = ctx.cfg.grids.r_schedule.empty() ? 0.9 : ctx.cfg.grids.r_schedule.front();
  const MultiplierBound b =
      multiplier_lower_bound(ctx.domain, f, ctx.measures, ctx.family, r, ctx.cfg.grids.n);
  CheckRecord rec;
  rec.check = "mult-bound";
  rec.name = fn;
  rec.value = b.value;
  rec.verdict = Verdict::pass;
  rec.wall_time_ms = sw.ms();
  rec.details["witness_measure"] = b.witness_measure;
  rec.details["witness_h"] =
      b.witness_h >= 0 ? ctx.family.members()[static_cast<std::size_t>(b.witness_h)].label : "";
  rec.details["r_used"] = b.r_used;
  return {rec};
}

inline std::vector<CheckRecord> run_theorem1(const RunContext& ctx, const std::string& fn) {
  const AnalyticFunction& f = ctx.cfg.function(fn);
  detail::StopWatch sw;
  const MultiplierVerdict v =
      theorem1_check(ctx.domain, f, ctx.measures, ctx.family, ctx.theorem1_params());
  std::vector<CheckRecord> out;

  CheckRecord lower;
  lower.check = "theorem1";
  lower.name = fn + ".mult_lower";
  lower.value = v.mult_lower;
  lower.verdict = Verdict::pass;
  lower.wall_time_ms = sw.ms();
  lower.details["witness_measure"] = v.witness_measure;
  lower.details["witness_h"] =
      v.witness_h >= 0 ? ctx.family.members()[static_cast<std::size_t>(v.witness_h)].label : "";
  out.push_back(std::move(lower));

  CheckRecord upper;
  upper.check = "theorem1";
  upper.name = fn + ".upper";
  upper.value = v.theorem1_upper;
  upper.verdict = v.lambda_report.converged ? Verdict::pass : Verdict::fail;
  upper.details["einf"] = v.einf;
  upper.details["lambda"] = v.lambda_report.lambda;
  upper.details["lambda_converged"] = v.lambda_report.converged;
  out.push_back(std::move(upper));

  CheckRecord slack;
  slack.check = "theorem1";
  slack.name = fn + ".slack";
  slack.value = v.slack;
  slack.expected = 0.0;
  slack.tol = ctx.cfg.tolerances.slack_tol;
  slack.verdict = v.slack >= -ctx.cfg.tolerances.slack_tol ? Verdict::pass : Verdict::fail;
  out.push_back(std::move(slack));
  return out;
}

inline std::vector<CheckRecord> run_theorem2(const RunContext& ctx, const std::string& fn, double p) {
  const AnalyticFunction& f = ctx.cfg.function(fn);
  detail::StopWatch sw;
  const Theorem2Report rep = theorem2_check(ctx.domain, f, p, ctx.theorem2_params());
  std::vector<CheckRecord> out;

  CheckRecord lam;
  lam.check = "theorem2";
  lam.name = fn + ".lambda";
  lam.value = rep.lambda;
  lam.verdict = rep.lambda_converged ? Verdict::pass : Verdict::fail;
  lam.wall_time_ms = sw.ms();
  lam.details["p"] = rep.p;
  lam.details["fprime_ep"] = rep.fprime_ep;
  lam.details["fprime_ep_normalized"] = rep.fprime_ep_normalized;
  lam.details["constant"] = rep.constant;
  out.push_back(std::move(lam));

  CheckRecord bound;
  bound.check = "theorem2";
  bound.name = fn + ".bound";
  bound.value = rep.bound;
  bound.verdict = rep.satisfied ? Verdict::pass : Verdict::fail;
  bound.details["margin"] = rep.bound - rep.lambda;
  out.push_back(std::move(bound));
  return out;
}

inline std::vector<CheckRecord> run_vinogradov(const RunContext& ctx, const std::string& fn) {
  const AnalyticFunction& f = ctx.cfg.function(fn);
  detail::StopWatch sw;
  VinogradovParams params;
  params.n = ctx.cfg.grids.n;
  params.n_eta = ctx.cfg.grids.n_eta;
  params.n_zeta0 = ctx.cfg.grids.n_zeta;
  params.lambda_tol = ctx.cfg.tolerances.lambda_tol;
  params.lambda_opts.n_zeta_max = ctx.cfg.grids.n_zeta_max;
  const VinogradovReport rep = vinogradov_probe(ctx.domain, f, params);
  std::vector<CheckRecord> out;

  CheckRecord lam;
  lam.check = "vinogradov";
  lam.name = fn + ".lambda";
  lam.value = rep.lambda;
  lam.verdict = Verdict::not_asserted;
  lam.wall_time_ms = sw.ms();
  lam.details["lambda_converged"] = rep.lambda_converged;
  out.push_back(std::move(lam));

  CheckRecord h1;
  h1.check = "vinogradov";
  h1.name = fn + ".fprime_h1";
  h1.value = rep.fprime_h1;
  h1.verdict = Verdict::not_asserted;
  out.push_back(std::move(h1));
  return out;
}

}  // namespace csmult

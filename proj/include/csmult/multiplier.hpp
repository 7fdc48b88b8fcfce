#pragma once

#include "csmult/cauchy.hpp"
#include "csmult/functions.hpp"
#include "csmult/geometry.hpp"
#include "csmult/numerics.hpp"
#include "csmult/parallel.hpp"
#include "csmult/spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csmult {

struct LambdaReport {
  double lambda = 0.0;
  double argmax_theta = 0.0;
  int n_eta = 0;
  int n_zeta = 0;
  double est_error = 0.0;
  bool converged = false;
};

struct LambdaOptions {
  int n_zeta_max = 1 << 18;
  double eta_offset = 0.0;
};

/// Lambda(f) = max over boundary anchors eta of
///   int_ell |f(zeta) - f(eta)| / |zeta - eta| |dzeta|,
/// the anchor max taken over an n_eta grid. The zeta grid is offset half a
/// step from the anchor grid; inside a three-step window around the anchor
/// the raw quotient is blended with |f'(eta)| (its limit value), which keeps
/// the integrand bounded without biasing the doubling limit. Grid doubling
/// continues until successive maxima agree within tol.
inline LambdaReport havin_lambda(const ConformalDomain& dom, const AnalyticFunction& f,
                                 int n_eta, int n_zeta0, double tol,
                                 const LambdaOptions& opts = {}) {
  if (n_eta < 1) throw std::invalid_argument("havin_lambda: n_eta must be positive");
  if (n_zeta0 < n_eta || n_zeta0 % n_eta != 0)
    throw std::invalid_argument("havin_lambda: n_zeta0 must be a positive multiple of n_eta");
  if (!(tol > 0.0)) throw std::invalid_argument("havin_lambda: tol must be positive");
  if (opts.n_zeta_max < 2 * n_zeta0)
    throw std::invalid_argument("havin_lambda: n_zeta_max must admit at least one doubling");

  std::vector<double> eta_theta(static_cast<std::size_t>(n_eta));
  std::vector<cdouble> eta(static_cast<std::size_t>(n_eta));
  std::vector<cdouble> f_eta(static_cast<std::size_t>(n_eta));
  std::vector<double> fp_eta(static_cast<std::size_t>(n_eta));
  for (int i = 0; i < n_eta; ++i) {
    const double th = opts.eta_offset + two_pi * i / n_eta;
    const cdouble t = std::polar(1.0, th);
    eta_theta[static_cast<std::size_t>(i)] = th;
    eta[static_cast<std::size_t>(i)] = dom.map(t);
    f_eta[static_cast<std::size_t>(i)] = f.eval(dom, t);
    fp_eta[static_cast<std::size_t>(i)] = std::abs(f.deriv(dom, t));
  }

  LambdaReport rep;
  rep.n_eta = n_eta;
  double prev = -1.0;
  for (int n = n_zeta0;; n *= 2) {
    const double h = two_pi / n;
    std::vector<cdouble> zeta(static_cast<std::size_t>(n));
    std::vector<cdouble> f_zeta(static_cast<std::size_t>(n));
    std::vector<double> speed(static_cast<std::size_t>(n));
    std::vector<double> th_zeta(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double th = opts.eta_offset + (static_cast<double>(j) + 0.5) * h;
      const cdouble z = std::polar(1.0, th);
      th_zeta[static_cast<std::size_t>(j)] = th;
      zeta[static_cast<std::size_t>(j)] = dom.map(z);
      f_zeta[static_cast<std::size_t>(j)] = f.eval(dom, z);
      speed[static_cast<std::size_t>(j)] = std::abs(dom.map_deriv(z));
    }

    std::vector<double> integral(static_cast<std::size_t>(n_eta));
    const double window = 3.0 * h;
    parallel_for(static_cast<std::size_t>(n_eta), [&](std::size_t i) {
      double sum = 0.0, comp = 0.0;  // Kahan
      for (int j = 0; j < n; ++j) {
        const double delta = geodesic_distance(th_zeta[static_cast<std::size_t>(j)], eta_theta[i]);
        double v = std::abs(f_zeta[static_cast<std::size_t>(j)] - f_eta[i]) /
                   std::abs(zeta[static_cast<std::size_t>(j)] - eta[i]);
        if (delta < window) {
          const double q = delta / window;
          v = q * v + (1.0 - q) * fp_eta[i];
        }
        const double term = v * speed[static_cast<std::size_t>(j)];
        const double y = term - comp;
        const double t2 = sum + y;
        comp = (t2 - sum) - y;
        sum = t2;
      }
      integral[i] = sum * h;
    });

    double lam = 0.0;
    double arg = eta_theta[0];
    for (int i = 0; i < n_eta; ++i) {
      if (integral[static_cast<std::size_t>(i)] > lam) {
        lam = integral[static_cast<std::size_t>(i)];
        arg = eta_theta[static_cast<std::size_t>(i)];
      }
    }

    rep.n_zeta = n;
    if (prev >= 0.0) {
      rep.est_error = std::abs(lam - prev);
      rep.lambda = lam;
      rep.argmax_theta = arg;
      if (rep.est_error < tol) {
        rep.converged = true;
        return rep;
      }
      if (2 * n > opts.n_zeta_max) return rep;
    } else {
      rep.lambda = lam;
      rep.argmax_theta = arg;
    }
    prev = lam;
  }
}

/// The exact difference quotient F_eta as an evaluable function.
inline AnalyticFunction diff_quotient(const AnalyticFunction& f, double eta_theta) {
  return AnalyticFunction::diff_quotient(f, eta_theta);
}

struct SkcReport {
  double max_value = 0.0;
  double argmax_theta = 0.0;
  std::vector<double> values;
};

/// Independent route to Lambda(f): for each anchor eta, integrate |F_eta|
/// over the boundary with F_eta evaluated exactly (divided differences), on a
/// plain offset-0 grid. Boundedness of these integrals is the Smirnov-side
/// characterization, and their max reproduces Lambda(f).
inline SkcReport smirnov_kotchine_check(const ConformalDomain& dom, const AnalyticFunction& f,
                                        const std::vector<double>& etas, int n) {
  if (etas.empty()) throw std::invalid_argument("smirnov_kotchine_check: empty anchor list");
  if (n < 8) throw std::invalid_argument("smirnov_kotchine_check: n must be at least 8");

  std::vector<cdouble> z(static_cast<std::size_t>(n));
  std::vector<double> speed(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = two_pi * j / n;
    z[static_cast<std::size_t>(j)] = std::polar(1.0, th);
    speed[static_cast<std::size_t>(j)] = std::abs(dom.map_deriv(z[static_cast<std::size_t>(j)]));
  }

  SkcReport rep;
  rep.values.resize(etas.size());
  parallel_for(etas.size(), [&](std::size_t i) {
    const AnalyticFunction F = AnalyticFunction::diff_quotient(f, etas[i]);
    double sum = 0.0, comp = 0.0;
    for (int j = 0; j < n; ++j) {
      const double term =
          std::abs(F.eval(dom, z[static_cast<std::size_t>(j)])) * speed[static_cast<std::size_t>(j)];
      const double y = term - comp;
      const double t2 = sum + y;
      comp = (t2 - sum) - y;
      sum = t2;
    }
    rep.values[i] = sum * two_pi / n;
  });

  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (rep.values[i] > rep.max_value) {
      rep.max_value = rep.values[i];
      rep.argmax_theta = etas[i];
    }
  }
  return rep;
}

struct MultiplierBound {
  double value = 0.0;
  std::string witness_measure;
  int witness_h = -1;
  double r_used = 0.0;
};

/// Certified lower bound on the multiplier norm of f:
///   sup_{mu, h} |(1/2pi i) oint_{ell_r} f h K_mu dzeta| / ||mu||
/// over the given measures and the unit-ball test family. Every quotient is a
/// valid lower bound, so the max over the search set is one too.
inline MultiplierBound multiplier_lower_bound(
    const ConformalDomain& dom, const AnalyticFunction& f,
    const std::vector<std::pair<std::string, BoundaryMeasure>>& measures,
    const TestFunctionFamily& family, double r, int n) {
  if (measures.empty()) throw std::invalid_argument("multiplier_lower_bound: no measures");
  if (!(r > 0.0) || !(r < 1.0))
    throw std::invalid_argument("multiplier_lower_bound: r must lie in (0, 1)");

  PeriodicGrid grid(n);
  std::vector<cdouble> prefactor(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = grid.node(j);
    const cdouble z = std::polar(r, th);
    const cdouble dz = cdouble{0.0, 1.0} * z * dom.map_deriv(z);
    // f(zeta) dzeta/dtheta * (dtheta weight) / (2 pi i)
    prefactor[static_cast<std::size_t>(j)] =
        f.eval(dom, z) * dz * (two_pi / n) / cdouble{0.0, two_pi};
  }

  std::vector<std::vector<cdouble>> h_vals(family.size());
  for (std::size_t m = 0; m < family.size(); ++m) {
    const TestFunction& tf = family.members()[m];
    if (!(tf.pole_radius < r))
      throw std::invalid_argument("multiplier_lower_bound: family pole on or outside ell_r");
    h_vals[m].resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      h_vals[m][static_cast<std::size_t>(j)] = tf.h.eval(dom, std::polar(r, grid.node(j)));
  }

  MultiplierBound out;
  out.r_used = r;
  for (const auto& [name, mu] : measures) {
    const double var = mu.variation();
    if (!(var > 0.0))
      throw std::domain_error("multiplier_lower_bound: measure '" + name + "' has zero variation");
    const std::vector<cdouble> K = transform_on_level_grid(dom, mu, r, n);
    for (std::size_t m = 0; m < family.size(); ++m) {
      cdouble acc{0.0, 0.0}, comp{0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        const cdouble term = prefactor[static_cast<std::size_t>(j)] *
                             h_vals[m][static_cast<std::size_t>(j)] * K[static_cast<std::size_t>(j)];
        const cdouble y = term - comp;
        const cdouble t2 = acc + y;
        comp = (t2 - acc) - y;
        acc = t2;
      }
      const double bound = std::abs(acc) / var;
      if (bound > out.value) {
        out.value = bound;
        out.witness_measure = name;
        out.witness_h = static_cast<int>(m);
      }
    }
  }
  return out;
}

struct MultiplierVerdict {
  double mult_lower = 0.0;
  double einf = 0.0;
  double theorem1_upper = 0.0;
  double slack = 0.0;
  std::string witness_measure;
  int witness_h = -1;
  LambdaReport lambda_report;
};

struct Theorem1Params {
  int n = 2048;
  double r = 0.9;
  int n_eta = 64;
  int n_zeta0 = 1024;
  double lambda_tol = 2e-7;
  double slack_tol = 1e-6;
  LambdaOptions lambda_opts{};
};

/// Checks ||f||_mult <= ||f||_{E-infinity} + Lambda(f) by computing the right
/// side and a certified lower bound for the left. A negative slack beyond
/// slack_tol means the computation (not the inequality) failed.
inline MultiplierVerdict theorem1_check(
    const ConformalDomain& dom, const AnalyticFunction& f,
    const std::vector<std::pair<std::string, BoundaryMeasure>>& measures,
    const TestFunctionFamily& family, const Theorem1Params& params = {}) {
  MultiplierVerdict v;
  v.lambda_report =
      havin_lambda(dom, f, params.n_eta, params.n_zeta0, params.lambda_tol, params.lambda_opts);
  v.einf = einf_norm(dom, f, params.n);
  v.theorem1_upper = v.einf + v.lambda_report.lambda;
  const MultiplierBound mlb = multiplier_lower_bound(dom, f, measures, family, params.r, params.n);
  v.mult_lower = mlb.value;
  v.witness_measure = mlb.witness_measure;
  v.witness_h = mlb.witness_h;
  v.slack = v.theorem1_upper - v.mult_lower;
  if (v.slack < -params.slack_tol)
    throw std::runtime_error(
        "theorem1_check: certified lower bound exceeds the upper bound; quadrature failure");
  return v;
}

/// C(p, s0, c0) = (1/c0) * p/(p-1) * 2^{1/p} * s0^{1 - 1/p}: the Holder bound
/// for the chord-integral sup_sigma int_0^{s0} |s - sigma|^{-1/p} ds divided
/// by the chord-arc constant.
inline double theorem2_constant(double p, double s0, double c0) {
  if (!(p > 1.0)) throw std::domain_error("theorem2_constant: p must exceed 1");
  if (!(s0 > 0.0)) throw std::domain_error("theorem2_constant: s0 must be positive");
  if (!(c0 > 0.0) || c0 > 1.0)
    throw std::domain_error("theorem2_constant: c0 must lie in (0, 1]");
  return (1.0 / c0) * (p / (p - 1.0)) * std::pow(2.0, 1.0 / p) * std::pow(s0, 1.0 - 1.0 / p);
}

struct Theorem2Report {
  double p = 0.0;
  double fprime_ep = 0.0;             // boundary E^p norm of f', plain integral
  double fprime_ep_normalized = 0.0;  // same with the 1/2pi normalization
  double constant = 0.0;
  double bound = 0.0;
  double lambda = 0.0;
  bool lambda_converged = false;
  bool satisfied = false;
};

struct Theorem2Params {
  std::vector<double> r_schedule{0.9, 0.99};
  double quad_tol = 1e-11;
  int n_eta = 64;
  int n_zeta0 = 1024;
  double lambda_tol = 2e-7;
  double tol = 1e-6;
  LambdaOptions lambda_opts{};
};

/// Checks Lambda(f) <= C(p, s0, c0) * ||f'||_{E^p} for smooth boundaries.
/// The E^p factor uses the unnormalized boundary integral, matching the
/// Holder pairing that produces the constant.
inline Theorem2Report theorem2_check(const ConformalDomain& dom, const AnalyticFunction& f,
                                     double p, const Theorem2Params& params = {}) {
  if (!(p > 1.0)) throw std::domain_error("theorem2_check: p must exceed 1");
  Theorem2Report rep;
  rep.p = p;

  const AnalyticFunction fprime = AnalyticFunction::derivative(f);
  std::vector<double> schedule = params.r_schedule;
  if (schedule.empty() || schedule.back() < 1.0) schedule.push_back(1.0);
  const NormReport ep = ep_norm(dom, fprime, p, schedule, params.quad_tol, false);
  rep.fprime_ep = ep.value;
  rep.fprime_ep_normalized = ep.value * std::pow(two_pi, -1.0 / p);

  rep.constant = theorem2_constant(p, dom.s0(), dom.chord_arc());
  rep.bound = rep.constant * rep.fprime_ep;

  const LambdaReport lam =
      havin_lambda(dom, f, params.n_eta, params.n_zeta0, params.lambda_tol, params.lambda_opts);
  rep.lambda = lam.lambda;
  rep.lambda_converged = lam.converged;
  rep.satisfied = rep.lambda <= rep.bound + params.tol;
  return rep;
}

struct VinogradovReport {
  double lambda = 0.0;
  bool lambda_converged = false;
  double fprime_h1 = 0.0;  // normalized boundary mean of |f'| on the disc
};

struct VinogradovParams {
  int n = 2048;
  int n_eta = 64;
  int n_zeta0 = 1024;
  double lambda_tol = 2e-7;
  LambdaOptions lambda_opts{};
};

/// p = 1 probe on the identity disc: reports Lambda(f) and the H^1 norm of f'
/// side by side. No inequality between them is asserted; whether a finite
/// H^1 norm of f' controls the multiplier property off the disc is open, so
/// the caller must treat this as observational output.
inline VinogradovReport vinogradov_probe(const ConformalDomain& dom, const AnalyticFunction& f,
                                         const VinogradovParams& params = {}) {
  const std::vector<cdouble>& c = dom.coeffs();
  if (c.size() != 1 || std::abs(c[0] - cdouble{1.0, 0.0}) > 1e-15)
    throw std::invalid_argument("vinogradov_probe: requires the identity disc domain");
  VinogradovReport rep;
  const LambdaReport lam =
      havin_lambda(dom, f, params.n_eta, params.n_zeta0, params.lambda_tol, params.lambda_opts);
  rep.lambda = lam.lambda;
  rep.lambda_converged = lam.converged;
  rep.fprime_h1 = level_mean(dom, AnalyticFunction::derivative(f), 1.0, 1.0, params.n);
  return rep;
}

}  // namespace csmult

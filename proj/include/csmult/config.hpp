#pragma once

#include "csmult/cauchy.hpp"
#include "csmult/functions.hpp"
#include "csmult/geometry.hpp"
#include "csmult/report.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csmult {

struct DomainSpec {
  std::vector<cdouble> coeffs;
  int n_check = 512;
};

struct GridSpec {
  int n = 2048;
  int n_eta = 64;
  int n_zeta = 1024;
  int n_zeta_max = 1 << 18;
  std::vector<double> r_schedule{0.9, 0.99};
  std::vector<cdouble> interior_grid{cdouble{0.0, 0.0}};
};

struct ToleranceSpec {
  double lambda_tol = 2e-7;
  double bracket_tol = 1e-7;
  double slack_tol = 1e-6;
  double theorem2_tol = 1e-6;
  double quad_tol = 1e-11;
};

inline cdouble parse_complex(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("config: " + where + " must be a [re, im] pair");
  return cdouble{j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cdouble> parse_complex_list(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument("config: " + where + " must be an array");
  std::vector<cdouble> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(parse_complex(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

/// Function specs:
///   {"kind": "pullback", "coeffs": [[re,im], ...]}          series in z
///   {"kind": "rational", "poly": [...], "poles": [{"a": [re,im], "order": m, "c": [re,im]}]}
///   {"kind": "diffquot", "base": <spec>, "eta_theta": t}
inline AnalyticFunction parse_function(const ordered_json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("config: " + where + " must be an object with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pullback") {
    return AnalyticFunction::pullback(parse_complex_list(j.at("coeffs"), where + ".coeffs"));
  }
  if (kind == "rational") {
    std::vector<cdouble> poly;
    if (j.contains("poly")) poly = parse_complex_list(j.at("poly"), where + ".poly");
    std::vector<PoleTerm> poles;
    if (j.contains("poles")) {
      const ordered_json& jp = j.at("poles");
      if (!jp.is_array()) throw std::invalid_argument("config: " + where + ".poles must be an array");
      for (std::size_t k = 0; k < jp.size(); ++k) {
        const ordered_json& e = jp[k];
        const std::string pw = where + ".poles[" + std::to_string(k) + "]";
        if (!e.is_object() || !e.contains("a"))
          throw std::invalid_argument("config: " + pw + " must be an object with 'a'");
        PoleTerm p;
        p.location = parse_complex(e.at("a"), pw + ".a");
        p.order = e.value("order", 1);
        if (e.contains("c")) p.coeff = parse_complex(e.at("c"), pw + ".c");
        poles.push_back(p);
      }
    }
    return AnalyticFunction::rational(std::move(poly), std::move(poles));
  }
  if (kind == "diffquot") {
    if (!j.contains("base") || !j.contains("eta_theta"))
      throw std::invalid_argument("config: " + where + " needs 'base' and 'eta_theta'");
    return AnalyticFunction::diff_quotient(parse_function(j.at("base"), where + ".base"),
                                           j.at("eta_theta").get<double>());
  }
  throw std::invalid_argument("config: " + where + " has unknown kind '" + kind + "'");
}

/// Measure specs: {"atoms": [{"theta": t, "w": [re,im]}], "density": {"flavor":
/// "complex-line"|"arclength", "fn": <function spec>}}. Either part may be
/// omitted.
inline BoundaryMeasure build_measure(const ConformalDomain& dom, const ordered_json& j,
                                     const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const ordered_json& ja = j.at("atoms");
    if (!ja.is_array()) throw std::invalid_argument("config: " + where + ".atoms must be an array");
    for (std::size_t k = 0; k < ja.size(); ++k) {
      const ordered_json& e = ja[k];
      const std::string aw = where + ".atoms[" + std::to_string(k) + "]";
      if (!e.is_object() || !e.contains("theta") || !e.contains("w"))
        throw std::invalid_argument("config: " + aw + " needs 'theta' and 'w'");
      atoms.push_back({e.at("theta").get<double>(), parse_complex(e.at("w"), aw + ".w")});
    }
  }
  std::optional<AnalyticFunction> density;
  DensityFlavor flavor = DensityFlavor::complex_line;
  if (j.contains("density")) {
    const ordered_json& jd = j.at("density");
    if (!jd.is_object() || !jd.contains("flavor") || !jd.contains("fn"))
      throw std::invalid_argument("config: " + where + ".density needs 'flavor' and 'fn'");
    const std::string fl = jd.at("flavor").get<std::string>();
    if (fl == "complex-line") flavor = DensityFlavor::complex_line;
    else if (fl == "arclength") flavor = DensityFlavor::arclength;
    else throw std::invalid_argument("config: " + where + ".density.flavor must be 'complex-line' or 'arclength'");
    density = parse_function(jd.at("fn"), where + ".density.fn");
  }
  return BoundaryMeasure(dom, std::move(atoms), std::move(density), flavor);
}

struct ExperimentConfig {
  std::uint64_t seed = 1;
  DomainSpec domain;
  std::vector<std::pair<std::string, AnalyticFunction>> functions;
  std::vector<std::pair<std::string, ordered_json>> measure_specs;
  FamilySpec family;
  GridSpec grids;
  ToleranceSpec tolerances;
  ordered_json echo = ordered_json::object();

  const AnalyticFunction& function(const std::string& name) const {
    for (const auto& [n, f] : functions)
      if (n == name) return f;
    throw std::invalid_argument("config: unknown function '" + name + "'");
  }

  const ordered_json& measure_spec(const std::string& name) const {
    for (const auto& [n, m] : measure_specs)
      if (n == name) return m;
    throw std::invalid_argument("config: unknown measure '" + name + "'");
  }
};

inline ExperimentConfig parse_config(const ordered_json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: root must be an object");
  ExperimentConfig cfg;
  cfg.echo = j;
  cfg.seed = j.value("seed", std::uint64_t{1});

  if (!j.contains("domain") || !j.at("domain").is_object() || !j.at("domain").contains("coeffs"))
    throw std::invalid_argument("config: missing domain.coeffs");
  cfg.domain.coeffs = parse_complex_list(j.at("domain").at("coeffs"), "domain.coeffs");
  cfg.domain.n_check = j.at("domain").value("n_check", 512);

  if (j.contains("functions")) {
    for (const auto& [name, spec] : j.at("functions").items())
      cfg.functions.emplace_back(name, parse_function(spec, "functions." + name));
  }
  if (j.contains("measures")) {
    for (const auto& [name, spec] : j.at("measures").items())
      cfg.measure_specs.emplace_back(name, spec);
  }

  if (j.contains("family")) {
    const ordered_json& jf = j.at("family");
    if (jf.contains("pole_radii")) {
      cfg.family.pole_radii.clear();
      for (const auto& r : jf.at("pole_radii")) cfg.family.pole_radii.push_back(r.get<double>());
    }
    cfg.family.poles_per_circle = jf.value("poles_per_circle", cfg.family.poles_per_circle);
    cfg.family.max_order = jf.value("max_order", cfg.family.max_order);
    cfg.family.random_combos = jf.value("random_combos", cfg.family.random_combos);
    cfg.family.norm_grid_n = jf.value("norm_grid_n", cfg.family.norm_grid_n);
    cfg.family.seed = jf.value("seed", cfg.seed);
  } else {
    cfg.family.seed = cfg.seed;
  }

  if (j.contains("grids")) {
    const ordered_json& jg = j.at("grids");
    cfg.grids.n = jg.value("n", cfg.grids.n);
    cfg.grids.n_eta = jg.value("n_eta", cfg.grids.n_eta);
    cfg.grids.n_zeta = jg.value("n_zeta", cfg.grids.n_zeta);
    cfg.grids.n_zeta_max = jg.value("n_zeta_max", cfg.grids.n_zeta_max);
    if (jg.contains("r_schedule")) {
      cfg.grids.r_schedule.clear();
      for (const auto& r : jg.at("r_schedule")) cfg.grids.r_schedule.push_back(r.get<double>());
    }
    if (jg.contains("interior_grid"))
      cfg.grids.interior_grid = parse_complex_list(jg.at("interior_grid"), "grids.interior_grid");
  }

  if (j.contains("tolerances")) {
    const ordered_json& jt = j.at("tolerances");
    cfg.tolerances.lambda_tol = jt.value("lambda_tol", cfg.tolerances.lambda_tol);
    cfg.tolerances.bracket_tol = jt.value("bracket_tol", cfg.tolerances.bracket_tol);
    cfg.tolerances.slack_tol = jt.value("slack_tol", cfg.tolerances.slack_tol);
    cfg.tolerances.theorem2_tol = jt.value("theorem2_tol", cfg.tolerances.theorem2_tol);
    cfg.tolerances.quad_tol = jt.value("quad_tol", cfg.tolerances.quad_tol);
  }

  const double tols[] = {cfg.tolerances.lambda_tol, cfg.tolerances.bracket_tol,
                         cfg.tolerances.slack_tol, cfg.tolerances.theorem2_tol,
                         cfg.tolerances.quad_tol};
  for (double t : tols)
    if (!(t > 0.0)) throw std::invalid_argument("config: tolerances must be positive");
  if (cfg.grids.n < 8 || cfg.grids.n_eta < 1 || cfg.grids.n_zeta < cfg.grids.n_eta)
    throw std::invalid_argument("config: grid sizes out of range");
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config: parse failure in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace csmult

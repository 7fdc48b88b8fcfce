#pragma once

#include "csmult/functions.hpp"
#include "csmult/geometry.hpp"
#include "csmult/numerics.hpp"
#include "csmult/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csmult {

enum class DensityFlavor { arclength, complex_line };

/// Point mass w at the boundary point phi(e^{i theta}).
struct Atom {
  double theta;
  cdouble weight;
};

/// Finite complex measure on the outer boundary: a finite atom list plus at
/// most one smooth density d. Flavor complex_line means d mu = d(zeta) dzeta,
/// arclength means d mu = d(zeta) |dzeta|. The total variation is computed on
/// construction: sum of |w_j| plus the arclength integral of |d|.
class BoundaryMeasure {
 public:
  BoundaryMeasure(const ConformalDomain& dom, std::vector<Atom> atoms,
                  std::optional<AnalyticFunction> density = std::nullopt,
                  DensityFlavor flavor = DensityFlavor::complex_line,
                  double var_tol = 1e-10)
      : atoms_(std::move(atoms)), density_(std::move(density)), flavor_(flavor) {
    normalize_atoms();
    if (density_) density_->validate_off_boundary(dom);
    variation_ = 0.0;
    for (const Atom& a : atoms_) variation_ += std::abs(a.weight);
    if (density_) {
      const auto integrand = [&](double th) {
        const cdouble z = std::polar(1.0, th);
        return cdouble{std::abs(density_->eval(dom, z)) * std::abs(dom.map_deriv(z)), 0.0};
      };
      const QuadratureResult q = adaptive_integral(integrand, 256, var_tol, 1 << 17);
      if (!q.converged)
        throw std::runtime_error("BoundaryMeasure: variation quadrature did not converge");
      variation_ += q.value.real();
    }
  }

  static BoundaryMeasure zero(const ConformalDomain& dom) { return BoundaryMeasure(dom, {}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<AnalyticFunction>& density() const { return density_; }
  DensityFlavor flavor() const { return flavor_; }
  double variation() const { return variation_; }

  BoundaryMeasure scaled(cdouble alpha) const {
    BoundaryMeasure m = *this;
    for (Atom& a : m.atoms_) a.weight *= alpha;
    if (m.density_) m.density_ = m.density_->scaled(alpha);
    m.variation_ *= std::abs(alpha);
    return m;
  }

 private:
  void normalize_atoms() {
    for (Atom& a : atoms_) {
      a.theta = std::fmod(a.theta, two_pi);
      if (a.theta < 0.0) a.theta += two_pi;
    }
    // merge coincident anchors so the variation formula stays honest
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
      bool found = false;
      for (Atom& b : merged) {
        if (b.theta == a.theta) {
          b.weight += a.weight;
          found = true;
          break;
        }
      }
      if (!found) merged.push_back(a);
    }
    atoms_ = std::move(merged);
  }

  std::vector<Atom> atoms_;
  std::optional<AnalyticFunction> density_;
  DensityFlavor flavor_ = DensityFlavor::complex_line;
  double variation_ = 0.0;
};

inline double variation_norm(const BoundaryMeasure& mu) { return mu.variation(); }

/// Sum of two measures. At most one operand may carry a density.
inline BoundaryMeasure add_measures(const ConformalDomain& dom, const BoundaryMeasure& a,
                                    const BoundaryMeasure& b) {
  if (a.density() && b.density())
    throw std::invalid_argument("add_measures: at most one operand may carry a density");
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  std::optional<AnalyticFunction> density = a.density() ? a.density() : b.density();
  const DensityFlavor flavor = a.density() ? a.flavor() : b.flavor();
  return BoundaryMeasure(dom, std::move(atoms), std::move(density), flavor);
}

namespace detail {

inline cdouble density_weight(const ConformalDomain& dom, DensityFlavor flavor, double th) {
  const cdouble z = std::polar(1.0, th);
  const cdouble dz = cdouble{0.0, 1.0} * z * dom.map_deriv(z);
  if (flavor == DensityFlavor::complex_line) return dz;
  return cdouble{std::abs(dz), 0.0};
}

}  // namespace detail

/// K_mu(zeta0) = int d mu(zeta) / (zeta - zeta0), zeta0 strictly inside G.
inline cdouble cauchy_transform(const ConformalDomain& dom, const BoundaryMeasure& mu,
                                cdouble zeta0) {
  if (dom.boundary_winding(zeta0) != 1)
    throw std::invalid_argument("cauchy_transform: evaluation point is not inside the domain");
  const double margin = 1e-6 * dom.diameter();
  double dist = std::numeric_limits<double>::infinity();
  const int ncheck = 1024;
  for (int j = 0; j < ncheck; ++j)
    dist = std::min(dist, std::abs(dom.map(std::polar(1.0, two_pi * j / ncheck)) - zeta0));
  if (dist <= margin)
    throw std::invalid_argument("cauchy_transform: evaluation point is too close to the boundary");

  cdouble val{0.0, 0.0};
  for (const Atom& a : mu.atoms())
    val += a.weight / (dom.map(std::polar(1.0, a.theta)) - zeta0);
  if (mu.density()) {
    const auto integrand = [&](double th) {
      const cdouble z = std::polar(1.0, th);
      return mu.density()->eval(dom, z) * detail::density_weight(dom, mu.flavor(), th) /
             (dom.map(z) - zeta0);
    };
    const QuadratureResult q = adaptive_integral(integrand, 512, 1e-12, 1 << 17);
    if (!q.converged)
      throw std::runtime_error("cauchy_transform: density quadrature did not converge");
    val += q.value;
  }
  return val;
}

/// K_mu sampled at the n nodes of ell_r (offset-0 grid). The atom part is
/// exact; the density part uses the same n for the inner boundary grid, whose
/// error decays spectrally in n since r < 1 keeps the kernel analytic.
inline std::vector<cdouble> transform_on_level_grid(const ConformalDomain& dom,
                                                    const BoundaryMeasure& mu, double r, int n) {
  if (!(r > 0.0) || !(r < 1.0))
    throw std::invalid_argument("transform_on_level_grid: r must lie in (0, 1)");
  PeriodicGrid grid(n);
  std::vector<cdouble> zeta(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) zeta[static_cast<std::size_t>(j)] = dom.map(std::polar(r, grid.node(j)));

  std::vector<cdouble> K(static_cast<std::size_t>(n), cdouble{0.0, 0.0});
  for (const Atom& a : mu.atoms()) {
    const cdouble loc = dom.map(std::polar(1.0, a.theta));
    for (int j = 0; j < n; ++j)
      K[static_cast<std::size_t>(j)] += a.weight / (loc - zeta[static_cast<std::size_t>(j)]);
  }
  if (mu.density()) {
    std::vector<cdouble> dw(static_cast<std::size_t>(n));
    std::vector<cdouble> bpt(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double th = grid.node(j);
      dw[static_cast<std::size_t>(j)] =
          mu.density()->eval(dom, std::polar(1.0, th)) * detail::density_weight(dom, mu.flavor(), th);
      bpt[static_cast<std::size_t>(j)] = dom.map(std::polar(1.0, th));
    }
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      std::vector<cdouble> terms(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        terms[static_cast<std::size_t>(j)] =
            dw[static_cast<std::size_t>(j)] / (bpt[static_cast<std::size_t>(j)] - zeta[i]);
      K[i] += periodic_trapezoid(terms);
    });
  }
  return K;
}

/// Duality pairing P_r = (1/2pi i) oint_{ell_r} h(zeta) K_mu(zeta) dzeta.
/// For h vanishing at infinity with poles inside ell_r this is independent of
/// r; with mu = delta at a it collapses to h(a) by the residue theorem.
inline cdouble pairing(const ConformalDomain& dom, const AnalyticFunction& h,
                       const BoundaryMeasure& mu, double r, int n) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("pairing: r must lie in (0, 1)");
  h.validate_exterior(dom);
  if (!(h.max_pole_preimage_radius(dom) < r))
    throw std::invalid_argument("pairing: a pole of h lies on or outside the integration curve");

  const std::vector<cdouble> K = transform_on_level_grid(dom, mu, r, n);
  PeriodicGrid grid(n);
  std::vector<cdouble> samples(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = grid.node(j);
    const cdouble z = std::polar(r, th);
    const cdouble dz = cdouble{0.0, 1.0} * z * dom.map_deriv(z);
    samples[static_cast<std::size_t>(j)] = h.eval(dom, z) * K[static_cast<std::size_t>(j)] * dz;
  }
  return periodic_trapezoid(samples) / cdouble{0.0, two_pi};
}

/// Normalized rational test function with bookkeeping for the pairing search.
struct TestFunction {
  AnalyticFunction h;
  double pole_radius = 0.0;  // largest preimage radius among its poles
  std::string label;
};

class TestFunctionFamily {
 public:
  explicit TestFunctionFamily(std::vector<TestFunction> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("TestFunctionFamily: empty family");
  }

  const std::vector<TestFunction>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<TestFunction> members_;
};

struct FamilySpec {
  std::vector<double> pole_radii{0.0, 0.3, 0.6};
  int poles_per_circle = 8;
  int max_order = 2;
  int random_combos = 8;
  std::uint64_t seed = 1;
  int norm_grid_n = 2048;
};

namespace detail {

inline double max_boundary_abs(const ConformalDomain& dom, const AnalyticFunction& f, int n) {
  double best = 0.0;
  for (int j = 0; j < n; ++j)
    best = std::max(best, std::abs(f.eval_boundary(dom, two_pi * j / n)));
  return best;
}

inline double rand_unit(std::uint64_t& state) {
  // xorshift* keeps the family reproducible across standard libraries
  state ^= state >> 12;
  state ^= state << 25;
  state ^= state >> 27;
  return static_cast<double>((state * 0x2545F4914F6CDD1DULL) >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Deterministic family of unit-sup-norm rational test functions: simple and
/// higher-order poles at phi-images of concentric disc grids, plus seeded
/// random convex combinations. Every member vanishes at infinity and has all
/// poles strictly inside G.
inline TestFunctionFamily make_test_family(const ConformalDomain& dom, const FamilySpec& spec) {
  if (spec.poles_per_circle < 1 || spec.max_order < 1)
    throw std::invalid_argument("make_test_family: counts must be positive");
  if (spec.norm_grid_n < 64)
    throw std::invalid_argument("make_test_family: norm_grid_n must be at least 64");

  std::vector<TestFunction> members;
  for (double rho : spec.pole_radii) {
    if (!(rho >= 0.0) || rho >= 1.0 - 1e-6)
      throw std::invalid_argument("make_test_family: pole radii must lie in [0, 1)");
    const int count = rho == 0.0 ? 1 : spec.poles_per_circle;
    for (int k = 0; k < count; ++k) {
      const cdouble zp = std::polar(rho, two_pi * k / count);
      const cdouble a = dom.map(zp);
      for (int m = 1; m <= spec.max_order; ++m) {
        AnalyticFunction raw = AnalyticFunction::rational({}, {PoleTerm{a, m, cdouble{1.0, 0.0}}});
        const double M = detail::max_boundary_abs(dom, raw, spec.norm_grid_n);
        if (!(M > 0.0)) throw std::runtime_error("make_test_family: degenerate member");
        AnalyticFunction h = raw.scaled(cdouble{1.0 / M, 0.0});
        char label[96];
        std::snprintf(label, sizeof label, "pole(r=%.3g,k=%d,m=%d)", rho, k, m);
        members.push_back({std::move(h), std::abs(zp), label});
      }
    }
  }

  const std::size_t base_count = members.size();
  std::uint64_t state = spec.seed == 0 ? 0x9E3779B97F4A7C15ULL : spec.seed;
  for (int c = 0; c < spec.random_combos; ++c) {
    const int parts = 2 + static_cast<int>(detail::rand_unit(state) * 3.0);
    AnalyticFunction combo = AnalyticFunction::rational({});
    double radius = 0.0;
    for (int t = 0; t < parts; ++t) {
      const std::size_t idx =
          static_cast<std::size_t>(detail::rand_unit(state) * static_cast<double>(base_count)) %
          base_count;
      const double w = 0.2 + detail::rand_unit(state);
      combo = add_functions(combo, members[idx].h.scaled(cdouble{w, 0.0}));
      radius = std::max(radius, members[idx].pole_radius);
    }
    const double M = detail::max_boundary_abs(dom, combo, spec.norm_grid_n);
    if (!(M > 0.0)) continue;
    char label[64];
    std::snprintf(label, sizeof label, "combo#%d", c);
    members.push_back({combo.scaled(cdouble{1.0 / M, 0.0}), radius, label});
  }

  for (const TestFunction& tf : members) tf.h.validate_exterior(dom);
  return TestFunctionFamily(std::move(members));
}

struct KNormBracket {
  double lower = 0.0;
  double upper = 0.0;
  int witness = -1;       // index into the family, -1 when lower is 0
  double r_final = 0.0;   // contour actually used after the atom-safety cap
};

/// Duality bracket for the K(G) norm of K_mu: lower = best pairing modulus
/// over the unit-ball test family, upper = total variation of mu. The last
/// schedule radius whose curve keeps at least 10 grid spacings away from all
/// atoms (and strictly outside all family poles) is used.
inline KNormBracket knorm_bracket(const ConformalDomain& dom, const BoundaryMeasure& mu,
                                  const TestFunctionFamily& family,
                                  const std::vector<double>& r_schedule, int n,
                                  double bracket_tol = 1e-7) {
  if (r_schedule.empty()) throw std::invalid_argument("knorm_bracket: empty r schedule");
  if (!(bracket_tol > 0.0)) throw std::invalid_argument("knorm_bracket: tol must be positive");

  double max_pole_radius = 0.0;
  for (const TestFunction& tf : family.members())
    max_pole_radius = std::max(max_pole_radius, tf.pole_radius);

  const auto safe_radius = [&](double r) {
    if (!(r > max_pole_radius) || r >= 1.0) return false;
    if (mu.atoms().empty()) return true;
    PeriodicGrid grid(n);
    const double cap = 10.0 * two_pi / n;
    for (const Atom& a : mu.atoms()) {
      const cdouble loc = dom.map(std::polar(1.0, a.theta));
      for (int j = 0; j < n; ++j) {
        if (std::abs(dom.map(std::polar(r, grid.node(j))) - loc) < cap) return false;
      }
    }
    return true;
  };

  double r_final = -1.0;
  for (std::size_t k = r_schedule.size(); k-- > 0;) {
    if (safe_radius(r_schedule[k])) {
      r_final = r_schedule[k];
      break;
    }
  }
  if (r_final < 0.0)
    throw std::invalid_argument(
        "knorm_bracket: no schedule radius is safely separated from the atoms at this n");

  KNormBracket out;
  out.r_final = r_final;
  out.upper = mu.variation();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double v = std::abs(pairing(dom, family.members()[i].h, mu, r_final, n));
    if (v > out.lower) {
      out.lower = v;
      out.witness = static_cast<int>(i);
    }
  }
  if (out.lower > out.upper + bracket_tol)
    throw std::runtime_error(
        "knorm_bracket: lower bound exceeds the variation; quadrature or family is invalid");
  return out;
}

/// Moments m_{-k} = oint zeta^{-k} d(zeta) dzeta, k = 1..count, of a pure
/// complex-line density. All vanish iff K_mu = 0 on G.
inline std::vector<cdouble> exterior_moment_test(const ConformalDomain& dom,
                                                 const BoundaryMeasure& mu, int count) {
  if (count < 1) throw std::invalid_argument("exterior_moment_test: count must be positive");
  if (!mu.atoms().empty() || !mu.density())
    throw std::invalid_argument("exterior_moment_test: measure must be a pure density");
  if (mu.flavor() != DensityFlavor::complex_line)
    throw std::invalid_argument("exterior_moment_test: arclength flavor is not supported");

  std::vector<cdouble> moments(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const auto integrand = [&](double th) {
      const cdouble z = std::polar(1.0, th);
      const cdouble zeta = dom.map(z);
      return ipow(cdouble{1.0, 0.0} / zeta, k) * mu.density()->eval(dom, z) *
             detail::density_weight(dom, DensityFlavor::complex_line, th);
    };
    const QuadratureResult q = adaptive_integral(integrand, 256, 1e-12, 1 << 17);
    if (!q.converged)
      throw std::runtime_error("exterior_moment_test: moment quadrature did not converge");
    moments[static_cast<std::size_t>(k) - 1] = q.value;
  }
  return moments;
}

/// Max |K_mu| over a grid of interior points; small for annihilating measures.
inline double knull_check(const ConformalDomain& dom, const BoundaryMeasure& mu,
                          const std::vector<cdouble>& interior_points) {
  if (interior_points.empty()) throw std::invalid_argument("knull_check: empty interior grid");
  double best = 0.0;
  for (const cdouble& z : interior_points)
    best = std::max(best, std::abs(cauchy_transform(dom, mu, dom.map(z))));
  return best;
}

}  // namespace csmult

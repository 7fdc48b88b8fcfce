#pragma once

#include "csmult/numerics.hpp"
#include "csmult/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace csmult {

/// Point of a level curve together with the tangent dzeta/dtheta there.
struct BoundaryPoint {
  cdouble zeta;
  cdouble dzeta_dtheta;
};

/// Tabulated arc-length parametrization of the outer boundary.
/// theta has m+1 entries covering [0, 2pi]; s is the cumulative trapezoid of
/// |phi'(e^{i theta})| and is strictly increasing.
struct ArcLengthMap {
  double s0 = 0.0;
  std::vector<double> theta;
  std::vector<double> s;

  double s_of_theta(double th) const {
    const std::size_t m = theta.size() - 1;
    double t = std::fmod(th, two_pi);
    if (t < 0.0) t += two_pi;
    const double h = two_pi / static_cast<double>(m);
    std::size_t k = std::min(static_cast<std::size_t>(t / h), m - 1);
    const double frac = (t - theta[k]) / h;
    return s[k] + frac * (s[k + 1] - s[k]);
  }

  double theta_of_s(double sv) const {
    double u = std::fmod(sv, s0);
    if (u < 0.0) u += s0;
    const auto it = std::upper_bound(s.begin(), s.end(), u);
    std::size_t k = static_cast<std::size_t>(it - s.begin());
    if (k == 0) k = 1;
    if (k > s.size() - 1) k = s.size() - 1;
    const double frac = (u - s[k - 1]) / (s[k] - s[k - 1]);
    return theta[k - 1] + frac * (theta[k] - theta[k - 1]);
  }
};

namespace detail {

inline std::string fmt_complex(cdouble z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", z.real(), z.imag());
  return buf;
}

}  // namespace detail

/// Simply connected domain G = phi(D) for a univalent polynomial
/// phi(z) = sum_{k>=1} c_k z^k on the closed unit disc. Construction verifies
/// univalence diagnostics (phi' root-free on the closed disc, boundary simple)
/// and caches the boundary length s0, the chord-arc constant and the diameter.
class ConformalDomain {
 public:
  ConformalDomain(std::vector<cdouble> coefficients, int n_check = 512)
      : coeffs_(std::move(coefficients)), n_check_(n_check) {
    if (coeffs_.empty())
      throw std::invalid_argument("build_domain: empty coefficient list");
    if (n_check_ < 64)
      throw std::invalid_argument("build_domain: n_check must be at least 64");
    if (std::abs(coeffs_[0]) == 0.0)
      throw std::invalid_argument("build_domain: c_1 must be nonzero (phi'(0) = c_1)");

    poly_.assign(coeffs_.size() + 1, cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < coeffs_.size(); ++k) poly_[k + 1] = coeffs_[k];
    dpoly_ = poly_derivative(poly_);
    ddpoly_ = poly_derivative(dpoly_);

    check_derivative_roots();
    check_derivative_on_circles();
    check_boundary_simple_and_measure();
    s0_ = compute_s0();
    c0_ = 0.0;  // placeholder until chord_arc_constant below
    c0_ = chord_arc_self(std::max(n_check_, 1024));
  }

  cdouble map(cdouble z) const { return poly_eval(poly_, z); }
  cdouble map_deriv(cdouble z) const { return poly_eval(dpoly_, z); }
  cdouble map_second_deriv(cdouble z) const { return poly_eval(ddpoly_, z); }

  const std::vector<cdouble>& coeffs() const { return coeffs_; }
  /// phi as an ascending polynomial including the zero constant term.
  const std::vector<cdouble>& poly() const { return poly_; }
  int n_check() const { return n_check_; }
  double s0() const { return s0_; }
  double chord_arc() const { return c0_; }
  double diameter() const { return diameter_; }

  BoundaryPoint boundary_point(double r, double theta) const {
    if (!(r > 0.0) || r > 1.0)
      throw std::invalid_argument("boundary_point: r must lie in (0, 1]");
    const cdouble z = std::polar(r, theta);
    const cdouble dz_dtheta = cdouble{0.0, 1.0} * z;
    return {map(z), map_deriv(z) * dz_dtheta};
  }

  /// Preimages of zeta0 under phi (roots of phi(z) - zeta0).
  std::vector<cdouble> preimages(cdouble zeta0) const {
    std::vector<cdouble> shifted = poly_;
    shifted[0] -= zeta0;
    return poly_roots(std::move(shifted));
  }

  double pole_preimage_radius(cdouble zeta0) const {
    double best = std::numeric_limits<double>::infinity();
    for (const cdouble& z : preimages(zeta0)) best = std::min(best, std::abs(z));
    return best;
  }

  /// Winding number of the outer boundary about zeta0; 1 inside, 0 outside.
  int boundary_winding(cdouble zeta0, int n = 2048) const {
    double total = 0.0;
    cdouble prev = map(std::polar(1.0, 0.0)) - zeta0;
    for (int j = 1; j <= n; ++j) {
      const cdouble cur = map(std::polar(1.0, two_pi * j / n)) - zeta0;
      total += std::arg(cur / prev);
      prev = cur;
    }
    return static_cast<int>(std::lround(total / two_pi));
  }

 private:
  friend ArcLengthMap arc_length_param(const ConformalDomain&, int);

  void check_derivative_roots() const {
    for (const cdouble& root : poly_roots(dpoly_)) {
      if (std::abs(root) <= 1.0 + 1e-9) {
        throw std::invalid_argument(
            "build_domain: phi' vanishes at z=" + detail::fmt_complex(root) +
            " with |z|=" + std::to_string(std::abs(root)) +
            " inside the closed unit disc; the map is not univalent there");
      }
    }
  }

  void check_derivative_on_circles() const {
    const double radii[] = {0.5, 0.9, 0.99, 1.0};
    for (double r : radii) {
      for (int j = 0; j < n_check_; ++j) {
        const double th = two_pi * j / n_check_;
        const double m = std::abs(map_deriv(std::polar(r, th)));
        if (!(m > 1e-12)) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "build_domain: |phi'| = %.3g at check node r=%.2f, theta=%.6f (node %d)",
                        m, r, th, j);
          throw std::invalid_argument(buf);
        }
      }
    }
  }

  // One O(n^2) sweep over the boundary grid gives both the diameter and the
  // self-intersection guard (chord over angular gap bounded away from 0).
  void check_boundary_simple_and_measure() {
    std::vector<cdouble> pts(static_cast<std::size_t>(n_check_));
    double max_speed = 0.0;
    for (int j = 0; j < n_check_; ++j) {
      const double th = two_pi * j / n_check_;
      pts[static_cast<std::size_t>(j)] = map(std::polar(1.0, th));
      max_speed = std::max(max_speed, std::abs(map_deriv(std::polar(1.0, th))));
    }
    const double floor = 1e-6 * std::max(1.0, max_speed);
    double diam = 0.0;
    for (int i = 0; i < n_check_; ++i) {
      for (int j = i + 1; j < n_check_; ++j) {
        const double chord = std::abs(pts[static_cast<std::size_t>(i)] -
                                      pts[static_cast<std::size_t>(j)]);
        diam = std::max(diam, chord);
        const double gap = geodesic_distance(two_pi * i / n_check_, two_pi * j / n_check_);
        if (chord < floor * gap) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "build_domain: boundary nearly self-intersects between theta=%.6f and theta=%.6f",
                        two_pi * i / n_check_, two_pi * j / n_check_);
          throw std::invalid_argument(buf);
        }
      }
    }
    diameter_ = diam;
  }

  double compute_s0() const {
    const auto speed = [this](double th) {
      return cdouble{std::abs(map_deriv(std::polar(1.0, th))), 0.0};
    };
    const QuadratureResult q = adaptive_integral(speed, 256, 1e-11, 1 << 20);
    if (!q.converged)
      throw std::runtime_error("build_domain: boundary length quadrature did not converge");
    return q.value.real();
  }

  double chord_arc_self(int n) const;

  std::vector<cdouble> coeffs_;
  std::vector<cdouble> poly_;
  std::vector<cdouble> dpoly_;
  std::vector<cdouble> ddpoly_;
  int n_check_;
  double s0_ = 0.0;
  double c0_ = 0.0;
  double diameter_ = 0.0;
};

inline ConformalDomain build_domain(std::vector<cdouble> coefficients, int n_check = 512) {
  return ConformalDomain(std::move(coefficients), n_check);
}

inline BoundaryPoint boundary_point(const ConformalDomain& dom, double r, double theta) {
  return dom.boundary_point(r, theta);
}

inline ArcLengthMap arc_length_param(const ConformalDomain& dom, int n) {
  if (n < 16) throw std::invalid_argument("arc_length_param: n must be at least 16");
  ArcLengthMap m;
  m.theta.resize(static_cast<std::size_t>(n) + 1);
  m.s.resize(static_cast<std::size_t>(n) + 1);
  std::vector<double> speed(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double th = two_pi * j / n;
    m.theta[static_cast<std::size_t>(j)] = th;
    speed[static_cast<std::size_t>(j)] = std::abs(dom.map_deriv(std::polar(1.0, th)));
  }
  m.s[0] = 0.0;
  const double h = two_pi / n;
  for (int j = 0; j < n; ++j) {
    m.s[static_cast<std::size_t>(j) + 1] =
        m.s[static_cast<std::size_t>(j)] +
        0.5 * h * (speed[static_cast<std::size_t>(j)] + speed[static_cast<std::size_t>(j) + 1]);
  }
  m.s0 = m.s.back();
  return m;
}

/// Worst chord-to-arc ratio over n equispaced arc-length samples of the outer
/// boundary, clamped into (0, 1]. Arc distance is taken the short way around.
/// Returns 0 if a ratio underflows (degenerate sampling), never NaN.
inline double chord_arc_constant(const ConformalDomain& dom, int n) {
  if (n < 64) throw std::invalid_argument("chord_arc_constant: n must be at least 64");
  const ArcLengthMap alm = arc_length_param(dom, std::max(4 * n, 4096));
  std::vector<cdouble> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double si = alm.s0 * static_cast<double>(i) / static_cast<double>(n);
    pts[static_cast<std::size_t>(i)] = dom.map(std::polar(1.0, alm.theta_of_s(si)));
  }
  double best = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double ds = alm.s0 * static_cast<double>(j - i) / static_cast<double>(n);
      const double d = std::min(ds, alm.s0 - ds);
      const double ratio =
          std::abs(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]) / d;
      if (!(ratio > 1e-12)) return 0.0;
      best = std::min(best, ratio);
    }
  }
  return std::min(best, 1.0);
}

inline double ConformalDomain::chord_arc_self(int n) const {
  return chord_arc_constant(*this, n);
}

/// View of the level curve ell_r = phi(|z| = r).
struct LevelCurve {
  const ConformalDomain* domain;
  double r;

  LevelCurve(const ConformalDomain& dom, double radius) : domain(&dom), r(radius) {
    if (!(r > 0.0) || r > 1.0)
      throw std::invalid_argument("LevelCurve: r must lie in (0, 1]");
  }

  BoundaryPoint at(double theta) const { return domain->boundary_point(r, theta); }
};

}  // namespace csmult

#pragma once

#include "csmult/geometry.hpp"
#include "csmult/numerics.hpp"
#include "csmult/poly.hpp"

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace csmult {

struct PoleTerm {
  cdouble location;
  int order = 1;
  cdouble coeff{1.0, 0.0};
};

/// Analytic function on (a neighbourhood of) the closure of G, in one of four
/// representations:
///   pullback      f(phi(z)) = sum a_k z^k, given by the disc-side series;
///   rational      f(zeta)   = poly(zeta) + sum c_j / (zeta - a_j)^{m_j};
///   diffquot      F_eta(zeta) = (f(zeta) - f(eta)) / (zeta - eta) for a base
///                 f and boundary anchor eta = phi(e^{i eta_theta});
///   derivative    f' of a base function.
/// Evaluation always goes through the disc parameter z with zeta = phi(z).
/// Divided differences are evaluated exactly (synthetic division for the
/// polynomial parts, telescoped products for pole terms), so the removable
/// point zeta = eta needs no special casing.
class AnalyticFunction {
 public:
  enum class Kind { pullback, rational, diff_quotient, derivative };

  static AnalyticFunction pullback(std::vector<cdouble> series) {
    AnalyticFunction f;
    f.kind_ = Kind::pullback;
    f.coeffs_ = std::move(series);
    return f;
  }

  static AnalyticFunction rational(std::vector<cdouble> poly, std::vector<PoleTerm> poles = {}) {
    for (const PoleTerm& p : poles)
      if (p.order < 1) throw std::invalid_argument("AnalyticFunction: pole order must be >= 1");
    AnalyticFunction f;
    f.kind_ = Kind::rational;
    f.poly_ = std::move(poly);
    f.poles_ = std::move(poles);
    return f;
  }

  static AnalyticFunction constant(cdouble c) { return rational({c}); }

  static AnalyticFunction diff_quotient(AnalyticFunction base, double eta_theta) {
    if (base.kind_ != Kind::pullback && base.kind_ != Kind::rational)
      throw std::invalid_argument("diff_quotient: base must be a pullback or rational function");
    AnalyticFunction f;
    f.kind_ = Kind::diff_quotient;
    f.base_ = std::make_shared<AnalyticFunction>(std::move(base));
    f.eta_theta_ = eta_theta;
    return f;
  }

  static AnalyticFunction derivative(AnalyticFunction base) {
    if (base.kind_ != Kind::pullback && base.kind_ != Kind::rational)
      throw std::invalid_argument("derivative: base must be a pullback or rational function");
    AnalyticFunction f;
    f.kind_ = Kind::derivative;
    f.base_ = std::make_shared<AnalyticFunction>(std::move(base));
    return f;
  }

  Kind kind() const { return kind_; }
  const std::vector<cdouble>& series() const { return coeffs_; }
  const std::vector<cdouble>& poly_part() const { return poly_; }
  const std::vector<PoleTerm>& poles() const { return poles_; }
  double eta_theta() const { return eta_theta_; }

  /// Value at zeta = phi(z); z is the disc parameter.
  cdouble eval(const ConformalDomain& dom, cdouble z) const {
    switch (kind_) {
      case Kind::pullback:
        return poly_eval(coeffs_, z);
      case Kind::rational: {
        const cdouble zeta = dom.map(z);
        cdouble v = poly_eval(poly_, zeta);
        for (const PoleTerm& p : poles_)
          v += p.coeff * ipow(cdouble{1.0, 0.0} / (zeta - p.location), p.order);
        return v;
      }
      case Kind::diff_quotient:
        return eval_diff_quotient(dom, z);
      case Kind::derivative:
        return base_->deriv(dom, z);
    }
    throw std::logic_error("AnalyticFunction: bad kind");
  }

  cdouble eval_boundary(const ConformalDomain& dom, double theta) const {
    return eval(dom, std::polar(1.0, theta));
  }

  /// df/dzeta at zeta = phi(z).
  cdouble deriv(const ConformalDomain& dom, cdouble z) const {
    switch (kind_) {
      case Kind::pullback: {
        const std::vector<cdouble> ds = poly_derivative(coeffs_);
        return poly_eval(ds, z) / dom.map_deriv(z);
      }
      case Kind::rational: {
        const cdouble zeta = dom.map(z);
        cdouble v = poly_eval(poly_derivative(poly_), zeta);
        for (const PoleTerm& p : poles_) {
          const cdouble inv = cdouble{1.0, 0.0} / (zeta - p.location);
          v -= p.coeff * static_cast<double>(p.order) * ipow(inv, p.order + 1);
        }
        return v;
      }
      case Kind::derivative:
        return base_->second_deriv(dom, z);
      case Kind::diff_quotient:
        throw std::logic_error("AnalyticFunction: derivative of a difference quotient is not supported");
    }
    throw std::logic_error("AnalyticFunction: bad kind");
  }

  AnalyticFunction scaled(cdouble alpha) const {
    AnalyticFunction f = *this;
    switch (kind_) {
      case Kind::pullback:
        for (auto& c : f.coeffs_) c *= alpha;
        return f;
      case Kind::rational:
        for (auto& c : f.poly_) c *= alpha;
        for (auto& p : f.poles_) p.coeff *= alpha;
        return f;
      case Kind::diff_quotient:
        return diff_quotient(base_->scaled(alpha), eta_theta_);
      case Kind::derivative:
        return derivative(base_->scaled(alpha));
    }
    throw std::logic_error("AnalyticFunction: bad kind");
  }

  AnalyticFunction plus_const(cdouble c) const {
    switch (kind_) {
      case Kind::pullback: {
        AnalyticFunction f = *this;
        if (f.coeffs_.empty()) f.coeffs_.push_back(c);
        else f.coeffs_[0] += c;
        return f;
      }
      case Kind::rational: {
        AnalyticFunction f = *this;
        if (f.poly_.empty()) f.poly_.push_back(c);
        else f.poly_[0] += c;
        return f;
      }
      case Kind::diff_quotient:
        // (f + c) has the same difference quotients as f.
        return diff_quotient(base_->plus_const(c), eta_theta_);
      case Kind::derivative:
        return derivative(base_->plus_const(c));
    }
    throw std::logic_error("AnalyticFunction: bad kind");
  }

  /// Rejects poles on or inside G; boundary densities and integrands must be
  /// analytic across the closure.
  void validate_interior(const ConformalDomain& dom, int grid_n = 512) const {
    if (kind_ == Kind::diff_quotient || kind_ == Kind::derivative) {
      base_->validate_interior(dom, grid_n);
      return;
    }
    if (kind_ != Kind::rational) return;
    const double margin = 1e-6 * dom.diameter();
    for (const PoleTerm& p : poles_) {
      if (dom.boundary_winding(p.location) != 0)
        throw std::invalid_argument("AnalyticFunction: pole at " +
                                    detail::fmt_complex(p.location) + " lies inside the domain");
      double dist = std::numeric_limits<double>::infinity();
      for (int j = 0; j < grid_n; ++j)
        dist = std::min(dist, std::abs(dom.map(std::polar(1.0, two_pi * j / grid_n)) - p.location));
      if (dist <= margin)
        throw std::invalid_argument("AnalyticFunction: pole at " +
                                    detail::fmt_complex(p.location) +
                                    " is within the boundary margin");
    }
  }

  /// Boundary densities only need to be analytic near the curve itself; their
  /// poles may sit on either side, just not on (or within a margin of) it.
  void validate_off_boundary(const ConformalDomain& dom, int grid_n = 512) const {
    if (kind_ == Kind::diff_quotient || kind_ == Kind::derivative) {
      base_->validate_off_boundary(dom, grid_n);
      return;
    }
    if (kind_ != Kind::rational) return;
    const double margin = 1e-6 * dom.diameter();
    for (const PoleTerm& p : poles_) {
      double dist = std::numeric_limits<double>::infinity();
      for (int j = 0; j < grid_n; ++j)
        dist = std::min(dist, std::abs(dom.map(std::polar(1.0, two_pi * j / grid_n)) - p.location));
      if (dist <= margin)
        throw std::invalid_argument("AnalyticFunction: pole at " +
                                    detail::fmt_complex(p.location) +
                                    " is within the boundary margin");
    }
  }

  /// Test functions for the duality pairing: rational, vanishing at infinity,
  /// all poles strictly inside G.
  void validate_exterior(const ConformalDomain& dom) const {
    if (kind_ != Kind::rational)
      throw std::invalid_argument("AnalyticFunction: exterior role requires a rational function");
    for (const cdouble& c : poly_)
      if (std::abs(c) != 0.0)
        throw std::invalid_argument(
            "AnalyticFunction: exterior role requires vanishing at infinity (no polynomial part)");
    if (poles_.empty())
      throw std::invalid_argument("AnalyticFunction: exterior role requires at least one pole");
    for (const PoleTerm& p : poles_) {
      if (dom.boundary_winding(p.location) != 1)
        throw std::invalid_argument("AnalyticFunction: exterior-role pole at " +
                                    detail::fmt_complex(p.location) + " is not inside the domain");
      if (!(dom.pole_preimage_radius(p.location) < 1.0 - 1e-6))
        throw std::invalid_argument("AnalyticFunction: exterior-role pole at " +
                                    detail::fmt_complex(p.location) + " is too close to the boundary");
    }
  }

  /// Largest preimage radius of any pole; the pairing contour must stay
  /// strictly outside this radius.
  double max_pole_preimage_radius(const ConformalDomain& dom) const {
    if (kind_ != Kind::rational)
      throw std::invalid_argument("AnalyticFunction: pole radius is defined for rational functions");
    double r = 0.0;
    for (const PoleTerm& p : poles_) r = std::max(r, dom.pole_preimage_radius(p.location));
    return r;
  }

 private:
  cdouble eval_diff_quotient(const ConformalDomain& dom, cdouble z) const {
    const cdouble t = std::polar(1.0, eta_theta_);
    if (base_->kind_ == Kind::pullback) {
      // (S(z) - S(t)) / (phi(z) - phi(t)) with both differences divided out
      // exactly; finite at z = t by construction.
      const std::vector<cdouble> qs = poly_divided_difference(base_->coeffs_, t);
      const std::vector<cdouble> qphi = poly_divided_difference(dom.poly(), t);
      return poly_eval(qs, z) / poly_eval(qphi, z);
    }
    const cdouble zeta = dom.map(z);
    const cdouble eta = dom.map(t);
    cdouble v = poly_eval(poly_divided_difference(base_->poly_, eta), zeta);
    for (const PoleTerm& p : base_->poles_) {
      // (A^m - B^m)/(zeta - eta) = -A B sum_{i} A^i B^{m-1-i} for
      // A = 1/(zeta - a), B = 1/(eta - a).
      const cdouble A = cdouble{1.0, 0.0} / (zeta - p.location);
      const cdouble B = cdouble{1.0, 0.0} / (eta - p.location);
      cdouble sum{0.0, 0.0};
      for (int i = 0; i < p.order; ++i) sum += ipow(A, i) * ipow(B, p.order - 1 - i);
      v += p.coeff * (-A * B * sum);
    }
    return v;
  }

  cdouble second_deriv(const ConformalDomain& dom, cdouble z) const {
    switch (kind_) {
      case Kind::pullback: {
        const std::vector<cdouble> d1 = poly_derivative(coeffs_);
        const std::vector<cdouble> d2 = poly_derivative(d1);
        const cdouble dphi = dom.map_deriv(z);
        const cdouble ddphi = dom.map_second_deriv(z);
        return (poly_eval(d2, z) * dphi - poly_eval(d1, z) * ddphi) / (dphi * dphi * dphi);
      }
      case Kind::rational: {
        const cdouble zeta = dom.map(z);
        cdouble v = poly_eval(poly_derivative(poly_derivative(poly_)), zeta);
        for (const PoleTerm& p : poles_) {
          const cdouble inv = cdouble{1.0, 0.0} / (zeta - p.location);
          v += p.coeff * static_cast<double>(p.order) * static_cast<double>(p.order + 1) *
               ipow(inv, p.order + 2);
        }
        return v;
      }
      default:
        throw std::logic_error("AnalyticFunction: second derivative unsupported for this kind");
    }
  }

  Kind kind_ = Kind::rational;
  std::vector<cdouble> coeffs_;
  std::vector<cdouble> poly_;
  std::vector<PoleTerm> poles_;
  std::shared_ptr<const AnalyticFunction> base_;
  double eta_theta_ = 0.0;
};

/// Pointwise sum; both operands must share the same plain representation.
inline AnalyticFunction add_functions(const AnalyticFunction& f, const AnalyticFunction& g) {
  using Kind = AnalyticFunction::Kind;
  if (f.kind() == Kind::pullback && g.kind() == Kind::pullback) {
    std::vector<cdouble> c = f.series();
    const std::vector<cdouble>& d = g.series();
    if (d.size() > c.size()) c.resize(d.size(), cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < d.size(); ++k) c[k] += d[k];
    return AnalyticFunction::pullback(std::move(c));
  }
  if (f.kind() == Kind::rational && g.kind() == Kind::rational) {
    std::vector<cdouble> c = f.poly_part();
    const std::vector<cdouble>& d = g.poly_part();
    if (d.size() > c.size()) c.resize(d.size(), cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < d.size(); ++k) c[k] += d[k];
    std::vector<PoleTerm> poles = f.poles();
    poles.insert(poles.end(), g.poles().begin(), g.poles().end());
    return AnalyticFunction::rational(std::move(c), std::move(poles));
  }
  throw std::invalid_argument("add_functions: operands must both be pullback or both be rational");
}

}  // namespace csmult

#pragma once

#include "csmult/numerics.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace csmult {

/// Horner evaluation of an ascending-coefficient polynomial; empty list is 0.
inline cdouble poly_eval(std::span<const cdouble> coeffs, cdouble z) {
  cdouble acc{0.0, 0.0};
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

inline cdouble poly_eval(const std::vector<cdouble>& coeffs, cdouble z) {
  return poly_eval(std::span<const cdouble>(coeffs.data(), coeffs.size()), z);
}

inline std::vector<cdouble> poly_derivative(std::span<const cdouble> coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<cdouble> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    d[k - 1] = coeffs[k] * static_cast<double>(k);
  return d;
}

inline std::vector<cdouble> poly_derivative(const std::vector<cdouble>& coeffs) {
  return poly_derivative(std::span<const cdouble>(coeffs.data(), coeffs.size()));
}

/// Synthetic division by (z - t): returns q with p(z) = p(t) + (z - t) q(z).
/// q is the exact divided difference (p(z) - p(t)) / (z - t).
inline std::vector<cdouble> poly_divided_difference(std::span<const cdouble> coeffs, cdouble t) {
  if (coeffs.size() <= 1) return {};
  const std::size_t d = coeffs.size() - 1;
  std::vector<cdouble> q(d);
  q[d - 1] = coeffs[d];
  for (std::size_t k = d - 1; k >= 1; --k) q[k - 1] = coeffs[k] + t * q[k];
  return q;
}

inline std::vector<cdouble> poly_divided_difference(const std::vector<cdouble>& coeffs, cdouble t) {
  return poly_divided_difference(std::span<const cdouble>(coeffs.data(), coeffs.size()), t);
}

inline cdouble ipow(cdouble z, int m) {
  cdouble r{1.0, 0.0};
  for (int i = 0; i < m; ++i) r *= z;
  return r;
}

/// All complex roots by Durand-Kerner simultaneous iteration. Adequate for
/// the low degrees (<= 16 or so) this library works with; roots of higher
/// multiplicity come back as clusters, which is fine for the modulus tests
/// the callers perform.
inline std::vector<cdouble> poly_roots(std::vector<cdouble> coeffs,
                                       int max_iter = 800, double tol = 1e-13) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  if (coeffs.size() <= 1) return {};
  const std::size_t d = coeffs.size() - 1;
  const cdouble lead = coeffs.back();
  for (auto& c : coeffs) c /= lead;
  if (d == 1) return {-coeffs[0]};

  double radius = 0.0;
  for (std::size_t k = 0; k < d; ++k) radius = std::max(radius, std::abs(coeffs[k]));
  radius += 1.0;  // Cauchy bound on root moduli

  std::vector<cdouble> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double ang = 1.1 + two_pi * static_cast<double>(k) / static_cast<double>(d);
    z[k] = 0.9 * radius * cdouble(std::cos(ang), std::sin(ang));
  }
  for (int it = 0; it < max_iter; ++it) {
    double max_step = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      cdouble den{1.0, 0.0};
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (std::abs(den) < 1e-300) {
        z[i] += cdouble(1e-8, 1e-8);
        continue;
      }
      const cdouble step = poly_eval(coeffs, z[i]) / den;
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < tol * std::max(1.0, radius)) break;
  }
  return z;
}

}  // namespace csmult

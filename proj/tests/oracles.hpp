#pragma once

// Test-local reference implementations. These are intentionally *different*
// algorithms from the library (midpoint rule instead of trapezoid, full
// recomputation instead of nested refinement, naive summation instead of
// compensated), so agreement is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using cdouble = std::complex<double>;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Midpoint rule over one period; spectrally accurate for smooth periodic
// integrands but with nodes disjoint from the library's trapezoid nodes.
inline cdouble periodic_midpoint(const std::function<cdouble(double)>& f, int n) {
  cdouble acc{0.0, 0.0};
  for (int j = 0; j < n; ++j) acc += f(kTwoPi * (j + 0.5) / n);
  return acc * (kTwoPi / static_cast<double>(n));
}

// Refine by doubling until two successive midpoint values agree.
inline cdouble refine_midpoint(const std::function<cdouble(double)>& f, int n0,
                               double tol, int n_max, bool* converged = nullptr) {
  cdouble prev = periodic_midpoint(f, n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    const cdouble cur = periodic_midpoint(f, n);
    if (std::abs(cur - prev) < tol) {
      if (converged) *converged = true;
      return cur;
    }
    prev = cur;
  }
  if (converged) *converged = false;
  return prev;
}

// Plain power-sum polynomial evaluation (no Horner), ascending coefficients.
inline cdouble power_sum_eval(const std::vector<cdouble>& coeffs, cdouble z) {
  cdouble acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    cdouble zk{1.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) zk *= z;
    acc += coeffs[k] * zk;
  }
  return acc;
}

// int_0^L u^{-1/p} du by dyadic panels with a high-order midpoint rule on
// each panel plus the exact tail of the last panel's limit. Avoids both the
// closed form and the tanh-sinh rule used elsewhere.
inline double dyadic_singular_integral(double length, double p) {
  const double alpha = 1.0 / p;
  double total = 0.0;
  double hi = length;
  const int panels = 60;
  for (int k = 0; k < panels; ++k) {
    const double lo = hi / 2.0;
    const int m = 512;
    const double step = (hi - lo) / m;
    double panel = 0.0;
    for (int j = 0; j < m; ++j) {
      const double u = lo + (j + 0.5) * step;
      panel += std::pow(u, -alpha);
    }
    total += panel * step;
    hi = lo;
  }
  // Exact remainder of the removable-singularity tail below the last panel.
  total += std::pow(hi, 1.0 - alpha) / (1.0 - alpha);
  return total;
}

// Residue-calculus value of (1/2pi i) * contour integral of g * dzeta where
// g = f * h and everything is a finite sum of simple building blocks: the
// tests call it with precomputed residues, so this is just the bookkeeping.
inline cdouble residue_sum(const std::vector<cdouble>& residues) {
  cdouble acc{0.0, 0.0};
  for (const cdouble& r : residues) acc += r;
  return acc;
}

}  // namespace oracles

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace csmult {

using cdouble = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Equispaced angles theta_j = offset + 2*pi*j/n, j = 0..n-1.
struct PeriodicGrid {
  int n;
  double offset;

  explicit PeriodicGrid(int n_, double offset_ = 0.0) : n(n_), offset(offset_) {
    if (n < 1) throw std::invalid_argument("PeriodicGrid: node count must be positive");
    if (offset < 0.0 || offset >= two_pi / n)
      throw std::invalid_argument("PeriodicGrid: offset must lie in [0, 2pi/n)");
  }

  double node(int j) const { return offset + two_pi * j / n; }

  std::vector<double> nodes() const {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = node(j);
    return t;
  }
};

/// Wrapped angular distance, in [0, pi].
inline double geodesic_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

namespace detail {

// Kahan compensated sum; complex +/- act componentwise so the real-valued
// argument carries over verbatim.
inline cdouble kahan_sum(std::span<const cdouble> xs) {
  cdouble s{0.0, 0.0};
  cdouble c{0.0, 0.0};
  for (const cdouble& x : xs) {
    const cdouble y = x - c;
    const cdouble t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace detail

/// One-period trapezoid rule for equispaced samples: (2pi/n) * sum(samples).
/// Spectrally accurate for smooth periodic integrands; exact up to rounding
/// for trigonometric polynomials of degree < n.
inline cdouble periodic_trapezoid(std::span<const cdouble> samples) {
  if (samples.empty())
    throw std::domain_error("periodic_trapezoid: empty sample sequence");
  return detail::kahan_sum(samples) * (two_pi / static_cast<double>(samples.size()));
}

inline cdouble periodic_trapezoid(const std::vector<cdouble>& samples) {
  return periodic_trapezoid(std::span<const cdouble>(samples.data(), samples.size()));
}

struct QuadratureResult {
  cdouble value{0.0, 0.0};
  int n_used = 0;
  double est_error = 0.0;  // |value_{2n} - value_n| from the last doubling
  bool converged = false;
};

/// Periodic quadrature with grid doubling. Old samples sit at the even slots
/// of the refined grid, so each level costs n new evaluations and the value
/// returned is bit-identical to periodic_trapezoid on the final grid.
inline QuadratureResult adaptive_integral(const std::function<cdouble(double)>& integrand,
                                          int n0, double tol, int n_max,
                                          double offset = 0.0) {
  if (n0 < 8) throw std::invalid_argument("adaptive_integral: n0 must be at least 8");
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_integral: tol must be positive");
  if (n_max < 2 * n0)
    throw std::invalid_argument("adaptive_integral: n_max must admit at least one doubling");

  std::vector<cdouble> samples(static_cast<std::size_t>(n0));
  for (int j = 0; j < n0; ++j)
    samples[static_cast<std::size_t>(j)] = integrand(offset + two_pi * j / n0);
  cdouble value = periodic_trapezoid(samples);

  int n = n0;
  double diff = std::numeric_limits<double>::infinity();
  while (n < n_max) {
    const int n2 = 2 * n;
    std::vector<cdouble> merged(static_cast<std::size_t>(n2));
    for (int j = 0; j < n; ++j) {
      merged[static_cast<std::size_t>(2 * j)] = samples[static_cast<std::size_t>(j)];
      merged[static_cast<std::size_t>(2 * j + 1)] = integrand(offset + two_pi * (2 * j + 1) / n2);
    }
    const cdouble v2 = periodic_trapezoid(merged);
    diff = std::abs(v2 - value);
    samples = std::move(merged);
    value = v2;
    n = n2;
    if (diff < tol) return {value, n, diff, true};
  }
  return {value, n, diff, false};
}

}  // namespace csmult

#include "csmult/poly.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <vector>

#include "oracles.hpp"

using csmult::cdouble;

namespace {

// Greedy nearest matching; adequate for well-separated roots.
double max_match_distance(std::vector<cdouble> got, const std::vector<cdouble>& want) {
  double worst = 0.0;
  for (const cdouble& w : want) {
    auto it = std::min_element(got.begin(), got.end(), [&](cdouble a, cdouble b) {
      return std::abs(a - w) < std::abs(b - w);
    });
    REQUIRE(it != got.end());
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

}  // namespace

TEST_CASE("horner evaluation matches power sums", "[poly]") {
  const std::vector<cdouble> p{{1.0, -2.0}, {0.5, 0.0}, {0.0, 3.0}, {-1.25, 0.75}};
  const std::vector<cdouble> zs{{0.3, -0.8}, {0.0, 0.0}, {-2.0, 1.0}, {5.0, 5.0}};
  for (const cdouble& z : zs)
    REQUIRE(std::abs(csmult::poly_eval(p, z) - oracles::power_sum_eval(p, z)) <
            1e-13 * (1.0 + std::abs(oracles::power_sum_eval(p, z))));
  REQUIRE(csmult::poly_eval(std::vector<cdouble>{}, cdouble{2.0, 0.0}) == cdouble{0.0, 0.0});
}

TEST_CASE("polynomial derivative coefficients", "[poly]") {
  const std::vector<cdouble> p{{1, 0}, {2, 0}, {3, 0}};
  const auto d = csmult::poly_derivative(p);
  REQUIRE(d.size() == 2);
  REQUIRE(d[0] == cdouble{2.0, 0.0});
  REQUIRE(d[1] == cdouble{6.0, 0.0});
  REQUIRE(csmult::poly_derivative(std::vector<cdouble>{{7, 0}}).empty());
  REQUIRE(csmult::poly_derivative(std::vector<cdouble>{}).empty());
}

TEST_CASE("divided difference is the synthetic quotient", "[poly]") {
  // p(z) = z^3 - 2z + 1 against the defining identity
  // p(z) = p(t) + (z - t) q(z).
  const std::vector<cdouble> p{{1, 0}, {-2, 0}, {0, 0}, {1, 0}};
  const cdouble t{0.7, -0.2};
  const auto q = csmult::poly_divided_difference(p, t);
  REQUIRE(q.size() == 3);
  const std::vector<cdouble> zs{{1.1, 0.4}, {-0.3, 0.0}, {0.7, -0.2}, {2.0, -3.0}};
  for (const cdouble& z : zs) {
    const cdouble lhs = csmult::poly_eval(p, z);
    const cdouble rhs = csmult::poly_eval(p, t) + (z - t) * csmult::poly_eval(q, z);
    REQUIRE(std::abs(lhs - rhs) < 1e-13 * (1.0 + std::abs(lhs)));
  }
  // q(t) = p'(t): the removable value of the quotient.
  const cdouble pd = csmult::poly_eval(csmult::poly_derivative(p), t);
  REQUIRE(std::abs(csmult::poly_eval(q, t) - pd) < 1e-13);
}

TEST_CASE("integer powers", "[poly]") {
  const cdouble z{0.8, -0.6};
  REQUIRE(csmult::ipow(z, 0) == cdouble{1.0, 0.0});
  REQUIRE(std::abs(csmult::ipow(z, 5) - z * z * z * z * z) < 1e-15);
}

TEST_CASE("root finder recovers scattered roots", "[poly]") {
  // (z - 0.5)(z + 2)(z - 3i), expanded by hand.
  const cdouble r1{0.5, 0.0}, r2{-2.0, 0.0}, r3{0.0, 3.0};
  const std::vector<cdouble> p{-r1 * r2 * r3, r1 * r2 + r1 * r3 + r2 * r3,
                               -(r1 + r2 + r3), {1.0, 0.0}};
  const auto roots = csmult::poly_roots(p);
  REQUIRE(roots.size() == 3);
  REQUIRE(max_match_distance(roots, {r1, r2, r3}) < 1e-10);
}

TEST_CASE("root finder on z^2 + 1 and low degrees", "[poly]") {
  const auto roots = csmult::poly_roots({{1, 0}, {0, 0}, {1, 0}});
  REQUIRE(roots.size() == 2);
  REQUIRE(max_match_distance(roots, {{0.0, 1.0}, {0.0, -1.0}}) < 1e-12);

  const auto lin = csmult::poly_roots({{-1.5, 0.0}, {3.0, 0.0}});
  REQUIRE(lin.size() == 1);
  REQUIRE(std::abs(lin[0] - cdouble{0.5, 0.0}) < 1e-14);

  REQUIRE(csmult::poly_roots({{4.0, 0.0}}).empty());
  REQUIRE(csmult::poly_roots({}).empty());
}

TEST_CASE("root finder strips trailing zero coefficients", "[poly]") {
  const auto roots = csmult::poly_roots({{-1, 0}, {1, 0}, {0, 0}, {0, 0}});
  REQUIRE(roots.size() == 1);
  REQUIRE(std::abs(roots[0] - cdouble{1.0, 0.0}) < 1e-12);
}

TEST_CASE("root finder sees the critical point of a near-cardioid", "[poly]") {
  // phi(z) = z + 0.6 z^2 has phi'(z) = 1 + 1.2 z with root -5/6 inside the
  // closed disc; this is the case the domain constructor must reject.
  const auto roots = csmult::poly_roots({{1.0, 0.0}, {1.2, 0.0}});
  REQUIRE(roots.size() == 1);
  REQUIRE(std::abs(roots[0] - cdouble{-5.0 / 6.0, 0.0}) < 1e-12);
}

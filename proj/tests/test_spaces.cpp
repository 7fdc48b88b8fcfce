#include "csmult/spaces.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"

using csmult::AnalyticFunction;
using csmult::build_domain;
using csmult::cdouble;
using csmult::ConformalDomain;
using csmult::PoleTerm;
using csmult::two_pi;

namespace {

const ConformalDomain& disc() {
  static const ConformalDomain d = build_domain({{1.0, 0.0}});
  return d;
}

const ConformalDomain& bump() {
  static const ConformalDomain d = build_domain({{1.0, 0.0}, {0.2, 0.0}});
  return d;
}

const AnalyticFunction& f_id() {
  static const auto f = AnalyticFunction::rational({{0, 0}, {1, 0}});
  return f;
}

}  // namespace

TEST_CASE("level means on the disc are powers of r", "[spaces]") {
  // (1/2pi) int |z|^p r dtheta = r^{p+1} for f = zeta on the disc.
  REQUIRE(csmult::level_mean(disc(), f_id(), 2.0, 0.5, 256) ==
          Catch::Approx(std::pow(0.5, 3.0)).margin(1e-13));
  REQUIRE(csmult::level_mean(disc(), f_id(), 1.0, 1.0, 256) ==
          Catch::Approx(1.0).margin(1e-13));
  REQUIRE_THROWS_AS(csmult::level_mean(disc(), f_id(), 0.0, 0.5, 64), std::invalid_argument);
  REQUIRE_THROWS_AS(csmult::level_mean(disc(), f_id(), 1.0, 1.5, 64), std::invalid_argument);

  // Evaluating across a boundary pole must surface, not silently square off.
  const auto bad = AnalyticFunction::rational({}, {PoleTerm{{1.0, 0.0}, 1, {1.0, 0.0}}});
  REQUIRE_THROWS_AS(csmult::level_mean(disc(), bad, 2.0, 1.0, 64), std::runtime_error);
}

TEST_CASE("ep norm of the identity on the disc", "[spaces]") {
  const auto rep = csmult::ep_norm(disc(), f_id(), 2.0, {0.5, 0.9, 1.0}, 1e-10);
  REQUIRE(rep.value == Catch::Approx(1.0).margin(1e-12));
  REQUIRE_FALSE(rep.monotone_violation);
  REQUIRE(rep.r_used == std::vector<double>{0.5, 0.9, 1.0});
  REQUIRE(rep.normalized);
  REQUIRE(rep.p == 2.0);
}

TEST_CASE("ep norm of constants uses the boundary measure", "[spaces]") {
  // ||c||_p = |c| (s0/2pi)^{1/p} in the normalized convention.
  const cdouble c{2.0, 1.0};
  const auto f = AnalyticFunction::constant(c);
  const double p = 3.0;
  const auto rep = csmult::ep_norm(bump(), f, p, {0.5, 0.9, 1.0}, 1e-10);
  const double expect = std::abs(c) * std::pow(bump().s0() / two_pi, 1.0 / p);
  REQUIRE(rep.value == Catch::Approx(expect).margin(1e-9));
}

TEST_CASE("ep norm against the half-residue oracle", "[spaces]") {
  // (1/2pi) int |e^{it} - 2|^{-2} dt = 1/3, so the E^2 norm of
  // 1/(zeta - 2) on the disc is 1/sqrt(3).
  const auto f = AnalyticFunction::rational({}, {PoleTerm{{2.0, 0.0}, 1, {1.0, 0.0}}});
  const auto rep = csmult::ep_norm(disc(), f, 2.0, {0.5, 0.9, 1.0}, 1e-11);
  REQUIRE(rep.value == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-10));

  // Same number from the midpoint oracle, independent of the library rule.
  const auto mod2 = [](double t) {
    const cdouble z = std::polar(1.0, t);
    const double m = std::abs(1.0 / (z - 2.0));
    return cdouble{m * m, 0.0};
  };
  const cdouble ref = oracles::refine_midpoint(mod2, 64, 1e-12, 1 << 12);
  REQUIRE(rep.value == Catch::Approx(std::sqrt(ref.real() / two_pi)).margin(1e-10));
}

TEST_CASE("unnormalized flavor scales by 2pi^(1/p)", "[spaces]") {
  const auto norm = csmult::ep_norm(disc(), f_id(), 2.0, {0.9, 1.0}, 1e-10, true);
  const auto raw = csmult::ep_norm(disc(), f_id(), 2.0, {0.9, 1.0}, 1e-10, false);
  REQUIRE_FALSE(raw.normalized);
  REQUIRE(raw.value == Catch::Approx(norm.value * std::pow(two_pi, 0.5)).margin(1e-10));
}

TEST_CASE("ep norm argument validation", "[spaces]") {
  REQUIRE_THROWS_AS(csmult::ep_norm(disc(), f_id(), 2.0, {}, 1e-8), std::invalid_argument);
  REQUIRE_THROWS_AS(csmult::ep_norm(disc(), f_id(), 2.0, {0.9, 0.5}, 1e-8),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(csmult::ep_norm(disc(), f_id(), 2.0, {0.9, 1.1}, 1e-8),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(csmult::ep_norm(disc(), f_id(), -1.0, {0.9}, 1e-8), std::invalid_argument);
}

TEST_CASE("boundary sup norm", "[spaces]") {
  REQUIRE(csmult::einf_norm(disc(), f_id(), 1024) == Catch::Approx(1.0).margin(1e-12));
  const auto sq = AnalyticFunction::rational({{0, 0}, {0, 0}, {1, 0}});
  // max |phi|^2 on the bump boundary is (1 + 0.2)^2 at theta = 0.
  REQUIRE(csmult::einf_norm(bump(), sq, 1024) == Catch::Approx(1.44).margin(1e-10));
}

TEST_CASE("direct and pullback means agree", "[spaces]") {
  const auto f = AnalyticFunction::rational({{0.5, 0}, {1, 0}},
                                            {PoleTerm{{2.0, -1.0}, 1, {1.0, 0.5}}});
  const auto pc = csmult::pullback_consistency(bump(), f, 2.0, 0.9, 512);
  REQUIRE(pc.direct == Catch::Approx(pc.pullback).margin(1e-10));
}

TEST_CASE("level means grow with r", "[spaces]") {
  const auto f = AnalyticFunction::pullback({{0.3, 0}, {1, 0}, {0, 0.7}});
  double prev = -1.0;
  for (double r : {0.3, 0.6, 0.9, 0.99}) {
    const double m = csmult::level_mean(bump(), f, 2.5, r, 1024);
    REQUIRE(m > prev);
    prev = m;
  }
}

TEST_CASE("logplus mean", "[spaces]") {
  // |4z| > 1 everywhere on |z| = 0.9, so log+ integrates exactly.
  const auto f4 = f_id().scaled({4.0, 0.0});
  const double got = csmult::logplus_mean(disc(), f4, 0.9, 512);
  REQUIRE(got == Catch::Approx(two_pi * 0.9 * std::log(3.6)).margin(1e-10));
  // |z| < 1 on the same curve: log+ vanishes identically.
  REQUIRE(csmult::logplus_mean(disc(), f_id(), 0.9, 512) == 0.0);
  REQUIRE_THROWS_AS(csmult::logplus_mean(disc(), f_id(), 1.0, 512), std::invalid_argument);
}

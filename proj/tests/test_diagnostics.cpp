#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "twoflux/diagnostics.hpp"
#include "twoflux/scenarios.hpp"
#include "twoflux/semigroup.hpp"

using namespace twoflux;

TEST_CASE("mollifier bump values and support", "[diagnostics]") {
  CHECK(mollifier(0.0) == std::exp(-1.0));
  CHECK(mollifier(1.0) == 0.0);
  CHECK(mollifier(-2.0) == 0.0);
  CHECK(mollifier(0.5) == std::exp(1.0 / (0.25 - 1.0)));
  CHECK(mollifier_prime(0.0) == 0.0);
  // derivative sign: decreasing for s > 0
  CHECK(mollifier_prime(0.5) < 0.0);
  CHECK(mollifier_prime(-0.5) > 0.0);
  CHECK(mollifier_prime(1.5) == 0.0);
  // finite-difference cross-check
  double h = 1e-7;
  CHECK(mollifier_prime(0.3) ==
        Catch::Approx((mollifier(0.3 + h) - mollifier(0.3 - h)) / (2 * h)).margin(1e-6));
}

TEST_CASE("sign interval masses partition the support", "[diagnostics]") {
  Profile p{Topology::line, {0.0, 0.25, 0.5, 1.0}, {0.0, 1.0, 2.0, -4.0, 0.0}};
  auto si = sign_interval_masses(p);
  REQUIRE(si.size() == 2);
  CHECK(si[0].sign == 1);
  CHECK(si[0].x_lo == 0.0);
  CHECK(si[0].x_hi == 0.5);
  CHECK(si[0].mass == 1.0 * 0.25 + 2.0 * 0.25);
  CHECK(si[1].sign == -1);
  CHECK(si[1].mass == -2.0);
  // zero cells break intervals
  Profile q{Topology::line, {0.0, 0.25, 0.5, 0.75}, {0.0, 1.0, 0.0, 1.0, 0.0}};
  CHECK(sign_interval_masses(q).size() == 2);
  Profile per = Profile::constant_periodic(1.0);
  CHECK_THROWS_AS(sign_interval_masses(per), std::invalid_argument);
}

TEST_CASE("plateau width bound formula", "[diagnostics]") {
  // lambda = 0: the width can never shrink below l0
  CHECK(plateau_width_bound(5.0, 0.25, 0.0, 1.0, 1.0) == 0.25);
  // early times: l0 - 2 lambda t branch dominates
  CHECK(plateau_width_bound(0.01, 0.5, 1.0, 1.0, 1.0) == 0.5 - 0.02);
  // late times: regrowth branch 2 lambda (t - t0) / (e^{4 lambda M / c0} - 1)
  double t0 = 0.5 / 4.0;
  double expected = 2.0 * (3.0 - t0) / std::expm1(4.0);
  CHECK(plateau_width_bound(3.0, 0.5, 1.0, 1.0, 1.0) == Catch::Approx(expected));
}

TEST_CASE("sampling-error estimate shrinks with resolution and is zero for affine",
          "[diagnostics]") {
  SmoothFluxPair burgers = make_flux_pair("burgers_shifted");
  double e46 = flux_error_estimate(4, 6, burgers, 2.0, 2.0, 1.0);
  double e68 = flux_error_estimate(6, 8, burgers, 2.0, 2.0, 1.0);
  CHECK(e46 > e68);
  CHECK(e68 > 0.0);
  SmoothFluxPair affine = make_flux_pair("custom", {{"gap", 1.0}}, {0.0, 0.5}, {1.0, 0.5});
  CHECK(flux_error_estimate(4, 8, affine, 2.0, 2.0, 1.0) <= 1e-14);
  CHECK_THROWS_AS(flux_error_estimate(8, 4, burgers, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("weak residual vanishes on the linear-decay square wave", "[diagnostics]") {
  SmoothFluxPair pair = make_flux_pair("constant_gap");
  Profile p = scenarios::square_wave(Topology::line, 0.0, 1.0, 1.0);
  std::vector<TestBump> bumps = {{0.5, 0.3, 0.5, 0.4}, {0.3, 0.2, 0.1, 0.3}, {0.7, 0.2, 0.9, 0.2}};
  auto res = weak_residual(10, p, pair, 1.0, bumps, 2000);
  REQUIRE(res.size() == 3);
  for (double r : res) CHECK(std::abs(r) <= 1e-7);
  // bump leaking outside (0, T) is rejected
  CHECK_THROWS_AS(weak_residual(10, p, pair, 1.0, {{0.1, 0.2, 0.5, 0.2}}, 100),
                  std::invalid_argument);
}

TEST_CASE("weak residual is nonzero for a corrupted evolution", "[diagnostics]") {
  // mutation check: a flipped front speed must register as a large residual,
  // otherwise the quadrature could be silently integrating zero
  SmoothFluxPair pair = make_flux_pair("burgers_shifted");
  Profile p = scenarios::square_wave(Topology::line, 0.0, 1.0, 1.0);
  // bump centered at x=0: the corrupted front starts there and barely moves,
  // so the test function must straddle the origin to see it
  std::vector<TestBump> bumps = {{0.15, 0.1, 0.0, 0.3}};
  double good = std::abs(weak_residual(4, p, pair, 0.3, bumps, 1000)[0]);
  TrackerOptions corrupt;
  corrupt.debug_flip_first_speed = true;
  double bad = std::abs(weak_residual(4, p, pair, 0.3, bumps, 1000, corrupt)[0]);
  CHECK(good <= 1e-6);
  CHECK(bad > 100.0 * std::max(good, 1e-9));
}

TEST_CASE("check_run verdicts pass on a healthy run and carry margins", "[diagnostics]") {
  SmoothFluxPair pair = make_flux_pair("burgers_shifted");
  Profile p = scenarios::random_piecewise(4, 8, 1.0);
  SemigroupRun r = run(8, p, pair, 0.5, {0.1, 0.2, 0.3, 0.4});
  DiagnosticsReport rep = check_run(r);
  CHECK(rep.all_pass());
  CHECK(rep.verdict("tv_monotone").margin >= 0.0);
  CHECK(rep.verdict("linf_monotone").pass);
  CHECK(rep.verdict("front_count_bound").margin >= 0.0);
  CHECK(rep.verdict("plateau_width_bound").pass);
  CHECK_THROWS_AS(rep.verdict("no_such"), std::out_of_range);
}

TEST_CASE("l1 distance between grid field and profile is exact", "[diagnostics]") {
  SmoothFluxPair pair = make_flux_pair("constant_gap");
  Profile p{Topology::periodic, {0.25, 0.75}, {1.0, 0.0}};
  ViscousField fld(8, p, pair, 0.1, 0.01);  // cell averages of p itself
  CHECK(l1_distance(fld, p) == 0.0);
  Profile shifted{Topology::periodic, {0.25, 0.875}, {1.0, 0.0}};
  CHECK(l1_distance(fld, shifted) == Catch::Approx(0.125));
  ViscousField other(16, p, pair, 0.1, 0.01);
  CHECK_THROWS_AS(l1_distance(fld, other), std::invalid_argument);
}

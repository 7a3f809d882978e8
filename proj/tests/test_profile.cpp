#include <catch2/catch_amalgamated.hpp>

#include "twoflux/profile.hpp"

using namespace twoflux;

TEST_CASE("periodic lookup wraps", "[profile]") {
  Profile p{Topology::periodic, {0.25, 0.75}, {1.0, -1.0}};
  p.validate();
  CHECK(p(0.5) == 1.0);
  CHECK(p(0.8) == -1.0);
  CHECK(p(0.1) == -1.0);   // before first breakpoint: wrap cell
  CHECK(p(1.5) == 1.0);    // x mod 1 = 0.5
  CHECK(p(-0.1) == -1.0);  // x mod 1 = 0.9
  CHECK(p(0.25) == 1.0);   // half-open cells [b_i, b_{i+1})
}

TEST_CASE("line lookup and exterior cells", "[profile]") {
  Profile p{Topology::line, {0.0, 1.0}, {0.0, 2.0, 0.0}};
  p.validate();
  CHECK(p(-5.0) == 0.0);
  CHECK(p(0.5) == 2.0);
  CHECK(p(1.5) == 0.0);
  CHECK(p(0.0) == 2.0);
}

TEST_CASE("validate rejects malformed profiles", "[profile]") {
  CHECK_THROWS_AS((Profile{Topology::periodic, {0.5, 0.25}, {1.0, 2.0}}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((Profile{Topology::periodic, {0.5, 1.5}, {1.0, 2.0}}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((Profile{Topology::line, {0.0}, {1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Profile{Topology::line, {}, {}}.validate()), std::invalid_argument);
}

TEST_CASE("merge_equal drops small jumps and keeps exact exterior", "[profile]") {
  Profile p{Topology::line, {0.0, 0.25, 0.5, 1.0}, {0.0, 1.0, 1.0 + 1e-12, 2.0, 0.0}};
  p.merge_equal(1e-9);
  REQUIRE(p.breakpoints.size() == 3);
  CHECK(p.values == std::vector<double>{0.0, 1.0, 2.0, 0.0});

  // a dropped trailing jump must restore the exact exterior value, not
  // leave the tol-sized residue of the last interior cell
  Profile q{Topology::line, {0.0, 0.5, 1.0}, {0.0, 1.0, 1e-10, 0.0}};
  q.merge_equal(1e-9);
  REQUIRE(q.breakpoints.size() == 2);
  CHECK(q.values.back() == 0.0);
}

TEST_CASE("merge_equal collapses an almost-constant periodic profile", "[profile]") {
  Profile p{Topology::periodic, {0.0, 0.25}, {0.5 + 1e-15, 0.5 - 1e-15}};
  p.merge_equal(1e-9);
  REQUIRE(p.breakpoints.empty());
  // width-weighted mean: 0.25 * (0.5+1e-15) + 0.75 * (0.5-1e-15)
  CHECK(p.values[0] == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("norms and mass", "[profile]") {
  Profile p{Topology::line, {0.0, 0.5, 1.0}, {0.0, 2.0, -1.0, 0.0}};
  CHECK(p.total_variation() == 2.0 + 3.0 + 1.0);
  CHECK(p.linf() == 2.0);
  CHECK(p.l1() == 2.0 * 0.5 + 1.0 * 0.5);
  CHECK(p.mass() == 2.0 * 0.5 - 1.0 * 0.5);

  Profile q{Topology::periodic, {0.25, 0.75}, {1.0, 0.0}};
  CHECK(q.total_variation() == 2.0);
  CHECK(q.mean() == 0.5);
  CHECK(q.l1() == 0.5);
  CHECK(Profile::constant_periodic(3.0).mean() == 3.0);

  Profile bad{Topology::line, {0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(bad.l1(), std::domain_error);
}

TEST_CASE("cell widths wrap on the circle", "[profile]") {
  Profile p{Topology::periodic, {0.25, 0.75}, {1.0, 0.0}};
  CHECK(p.cell_width(0) == 0.5);
  CHECK(p.cell_width(1) == 0.5);
  Profile q{Topology::periodic, {0.1, 0.2, 0.9}, {1.0, 2.0, 3.0}};
  CHECK(q.cell_width(2) == Catch::Approx(0.2));  // 0.9 -> 0.1 across the seam
}

TEST_CASE("l1 distance integrates over the breakpoint union", "[profile]") {
  Profile a{Topology::periodic, {0.0, 0.5}, {1.0, 0.0}};
  Profile b{Topology::periodic, {0.25, 0.5}, {1.0, 0.0}};
  // they differ exactly on [0, 0.25)
  CHECK(l1_distance(a, b) == 0.25);
  CHECK(l1_distance(a, a) == 0.0);

  Profile c{Topology::line, {0.0, 1.0}, {0.0, 1.0, 0.0}};
  Profile d{Topology::line, {0.5, 1.5}, {0.0, 1.0, 0.0}};
  CHECK(l1_distance(c, d) == 1.0);
  CHECK_THROWS_AS(l1_distance(a, c), std::invalid_argument);
}

TEST_CASE("pointwise ordering check", "[profile]") {
  Profile a{Topology::periodic, {0.0, 0.5}, {1.0, 0.0}};
  Profile b{Topology::periodic, {0.0, 0.5}, {1.5, 0.0}};
  CHECK(profile_le(a, b));
  CHECK_FALSE(profile_le(b, a));
  CHECK(profile_le(b, a, 0.6));
  Profile c{Topology::line, {0.0, 1.0}, {0.0, 1.0, 0.0}};
  Profile d{Topology::line, {0.0, 1.0}, {0.0, 0.5, 0.0}};
  CHECK(profile_le(d, c));
  CHECK_FALSE(profile_le(c, d));
}

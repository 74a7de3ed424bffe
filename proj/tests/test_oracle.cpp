#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "momentcurve/momentcurve.hpp"
#include "test_support.hpp"

namespace mc = momentcurve;
using test_support::make_naming;

TEST_CASE("grid parameters are validated") {
  CHECK_THROWS_AS(mc::GridSpec(1, 1e-6), mc::InvalidShape);
  CHECK_THROWS_AS(mc::GridSpec(100, 0.0), mc::InvalidShape);
  CHECK_THROWS_AS(mc::GridSpec(100, -1.0), mc::InvalidShape);
  CHECK_NOTHROW(mc::GridSpec(2, 1e-6));
  // The grid must resolve the dimension: at least n+2 points.
  CHECK_THROWS_AS(mc::lp_membership(mc::lift(0.5, 3), mc::Interval(0.0, 1.0),
                                    mc::GridSpec(4, 1e-6)),
                  mc::InvalidShape);
}

TEST_CASE("feasibility oracle on pinned examples") {
  const mc::Interval iv(0.0, 1.0);
  const mc::GridSpec grid(2001, 1e-6);
  SECTION("curve points are feasible") {
    CHECK(mc::lp_membership(mc::lift(0.37, 2), iv, grid));
    CHECK(mc::lp_membership(mc::lift(0.37, 3), iv, grid));
    CHECK(mc::lp_membership(mc::lift(0.0, 3), iv, grid));
    CHECK(mc::lp_membership(mc::lift(1.0, 3), iv, grid));
  }
  SECTION("above-chord point is infeasible") {
    CHECK_FALSE(mc::lp_membership(mc::MomentPoint(2, {0.5, 0.6}), iv, grid));
  }
  SECTION("known interior point is feasible") {
    CHECK(mc::lp_membership(mc::MomentPoint(2, {0.5, 0.3}), iv, grid));
  }
  SECTION("far-outside points are infeasible") {
    CHECK_FALSE(mc::lp_membership(mc::MomentPoint(2, {2.0, 2.0}), iv, grid));
    CHECK_FALSE(mc::lp_membership(mc::MomentPoint(3, {0.5, -0.5, 0.1}), iv, grid));
  }
}

TEST_CASE("random naming generator") {
  const mc::Interval iv(0.0, 1.0);
  SECTION("deterministic in the seed") {
    const mc::Naming a = mc::random_naming(3, iv, 4, 99);
    const mc::Naming b = mc::random_naming(3, iv, 4, 99);
    REQUIRE(a.atom_count() == b.atom_count());
    for (int i = 0; i < a.atom_count(); ++i) {
      CHECK(a.atoms()[static_cast<std::size_t>(i)].t ==
            b.atoms()[static_cast<std::size_t>(i)].t);
      CHECK(a.atoms()[static_cast<std::size_t>(i)].c ==
            b.atoms()[static_cast<std::size_t>(i)].c);
    }
    const mc::Naming c = mc::random_naming(3, iv, 4, 100);
    bool any_diff = false;
    for (int i = 0; i < a.atom_count() && !any_diff; ++i)
      any_diff = a.atoms()[static_cast<std::size_t>(i)].t !=
                 c.atoms()[static_cast<std::size_t>(i)].t;
    CHECK(any_diff);
  }
  SECTION("even dimensions get the pinned atom") {
    const mc::Naming P = mc::random_naming(4, iv, 1, 7);
    REQUIRE(P.atom_count() == 2);
    CHECK(P.parity() == mc::Parity::HalfInteger);
    CHECK(P.atoms()[0].t == 0.0);
    const mc::Naming Q = mc::random_naming(3, iv, 5, 7);
    CHECK(Q.atom_count() == 5);
    CHECK(Q.parity() == mc::Parity::Integer);
  }
  SECTION("outputs evaluate into the hull under both membership views") {
    const mc::GridSpec grid(2001, 1e-6);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const int n = 1 + static_cast<int>(seed % 4);
      const mc::Naming P = mc::random_naming(n, iv, n + 1, seed);
      const mc::MomentPoint p = mc::evaluate(P);
      CHECK(mc::lp_membership(p, iv, grid));
      CHECK(mc::membership(p, iv).tag != mc::Region::Outside);
    }
  }
}

TEST_CASE("two membership views agree away from the boundary band") {
  const mc::Interval iv(0.0, 1.0);
  const mc::GridSpec grid(2001, 1e-6);
  auto g = test_support::rng(401);
  int checked = 0;
  for (int rep = 0; rep < 120; ++rep) {
    const int n = 1 + static_cast<int>(g() % 3);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = test_support::uniform(g, 0.0, 1.0);
    const mc::MomentPoint p(n, v);
    const mc::Region tag = mc::membership(p, iv).tag;
    const bool feasible = mc::lp_membership(p, iv, grid);
    // A certificate proves membership, so a certified point must be
    // LP-feasible.  The converse (outside but LP-feasible) can only happen
    // within the slack band around the boundary and is not a disagreement.
    if (tag != mc::Region::Outside) {
      CHECK(feasible);
      ++checked;
    }
  }
  CHECK(checked > 0);  // the sample actually exercised certified points
}

TEST_CASE("continuity probe") {
  const mc::Interval iv(0.0, 1.0);
  const mc::Naming gen(iv, 3, mc::Parity::Integer, {{0.3, 0.55}, {0.7, 0.45}});
  const mc::MomentPoint p = mc::evaluate(gen);
  SECTION("zero radius probes nothing") {
    CHECK(mc::continuity_probe(p, iv, 0.0, 8, 5) == 0.0);
  }
  SECTION("argument validation") {
    CHECK_THROWS_AS(mc::continuity_probe(p, iv, -1.0, 8, 5), mc::InvalidShape);
    CHECK_THROWS_AS(mc::continuity_probe(p, iv, 1e-6, 0, 5), mc::InvalidShape);
  }
  SECTION("requires a strictly interior base point") {
    CHECK_THROWS_AS(mc::continuity_probe(mc::lift(0.5, 2), iv, 1e-6, 8, 5),
                    mc::NotInterior);
    CHECK_THROWS_AS(
        mc::continuity_probe(mc::MomentPoint(2, {0.5, 0.6}), iv, 1e-6, 8, 5),
        mc::NotInterior);
  }
  SECTION("doubling the radius never decreases the value") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const double small = mc::continuity_probe(p, iv, 1e-6, 16, seed);
      const double doubled = mc::continuity_probe(p, iv, 2e-6, 16, seed);
      const double doubled_again = mc::continuity_probe(p, iv, 4e-6, 16, seed);
      CHECK(small <= doubled);
      CHECK(doubled <= doubled_again);
      CHECK(small > 0.0);
    }
  }
  SECTION("small radii report small movements on a well-conditioned point") {
    CHECK(mc::continuity_probe(p, iv, 1e-6, 32, 11) <= 1e-3);
  }
  SECTION("deterministic in the seed") {
    CHECK(mc::continuity_probe(p, iv, 1e-6, 16, 4) ==
          mc::continuity_probe(p, iv, 1e-6, 16, 4));
  }
}

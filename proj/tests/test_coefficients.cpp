#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rfimdi/channel.hpp"
#include "rfimdi/coefficients.hpp"

using namespace rfimdi;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("balanced point is feasible on clean tables") {
  for (double theta : {0.0, 0.4, kPi / 4.0, 2.0}) {
    const ProbabilityTable t = ideal_table({0.0, theta});
    for (Side side : {Side::alice, Side::bob}) {
      for (int k : {2, 3}) {
        CAPTURE(theta, k, side == Side::alice);
        CHECK(is_feasible({kInvSqrt2, kInvSqrt2},
                          make_side_spec(t, side, k)));
      }
    }
  }
}

TEST_CASE("inflated point fails when a cross term is pinned to zero") {
  // With p10 = 0 the cross term vanishes and the row forces
  // p20 = p00 * a0^2 exactly; (0.9, 0.9) overshoots it.
  const ProbabilityTable t = ideal_table({0.0, kPi / 4.0});
  CHECK_FALSE(is_feasible({0.9, 0.9}, make_side_spec(t, Side::alice, 2)));
}

TEST_CASE("points below the normalization floor are infeasible") {
  const ProbabilityTable t = ideal_table({0.0, kPi / 4.0});
  // (a0 + a1)^2 must reach 1; (0.2, 0.2) cannot.
  CHECK_FALSE(is_feasible({0.2, 0.2}, make_side_spec(t, Side::alice, 2)));
  // Amplitude cap and sign constraints.
  CHECK_FALSE(is_feasible({-0.1, 1.0}, make_side_spec(t, Side::alice, 2)));
  CHECK_FALSE(is_feasible({3.5, 0.2}, make_side_spec(t, Side::alice, 2)));
}

TEST_CASE("grid enumeration pins the clean-table point") {
  const ProbabilityTable t = ideal_table({0.0, kPi / 4.0});
  const SideRowSpec spec = make_side_spec(t, Side::alice, 2);
  const int grid_n = 301;
  const auto points = enumerate_feasible(spec, grid_n);
  REQUIRE_FALSE(points.empty());
  const double spacing = kAmpCap / (grid_n - 1);
  for (const auto& pt : points) {
    CAPTURE(pt.a0, pt.a1);
    CHECK(std::abs(pt.a0 - kInvSqrt2) <= spacing + 1e-12);
    CHECK(std::abs(pt.a1 - kInvSqrt2) <= spacing + 1e-12);
  }
}

TEST_CASE("noisy tables keep a band around the balanced point") {
  const ProbabilityTable t = ideal_table({0.01, kPi / 4.0});
  const SideRowSpec spec = make_side_spec(t, Side::alice, 2);
  CHECK(is_feasible({kInvSqrt2, kInvSqrt2}, spec));
  const auto points = enumerate_feasible(spec, 151);
  CHECK(points.size() > 1);
}

TEST_CASE("impossible checking row is flagged inconsistent") {
  ProbabilityTable t;
  t.size = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t.p[i][j] = 0.25;
  t.p[2][0] = 1.0;
  t.p[0][0] = 0.01;
  t.p[1][0] = 0.01;
  const SideRowSpec spec = make_side_spec(t, Side::alice, 2);
  CHECK(enumerate_feasible(spec, 61).empty());
  CHECK(build_region(spec).empty);
  const ConsistencyReport report = consistency_check(t);
  REQUIRE_FALSE(report.ok);
  REQUIRE_FALSE(report.failures.empty());
  CHECK(report.failures[0].find("Alice") != std::string::npos);
  CHECK_THROWS_AS(require_consistent(t), InconsistentError);
}

TEST_CASE("milder impossible row also trips the check") {
  ProbabilityTable t = ideal_table({0.0, kPi});
  t.p[2][0] = 0.9;
  t.p[0][0] = 0.05;
  t.p[1][0] = 0.05;
  const ConsistencyReport report = consistency_check(t);
  CHECK_FALSE(report.ok);
}

TEST_CASE("checking-pair cells do not affect side consistency") {
  ProbabilityTable t = ideal_table({0.0, kPi});
  t.p[2][2] = 1.0;  // inconsistent downstream, but side rows are untouched
  CHECK(consistency_check(t).ok);
}

TEST_CASE("channel tables are always consistent") {
  for (double eb : {0.0, 0.005, 0.02, 0.1, 0.4}) {
    for (int i = 0; i < 6; ++i) {
      const double theta = i * kPi / 5.0;
      CAPTURE(eb, theta);
      CHECK(consistency_check(ideal_table({eb, theta})).ok);
    }
  }
}

TEST_CASE("widening the tolerance never shrinks the feasible set") {
  const ProbabilityTable t = ideal_table({0.02, 1.3});
  const SideRowSpec spec = make_side_spec(t, Side::bob, 3);
  const auto tight = enumerate_feasible(spec, 101, 1e-9);
  const auto loose = enumerate_feasible(spec, 101, 1e-3);
  CHECK(tight.size() <= loose.size());
  // Every tight point must appear among the loose points (same lattice, so
  // exact coordinate matches are expected).
  std::size_t found = 0;
  for (const auto& pt : tight) {
    for (const auto& lp : loose) {
      if (lp.a0 == pt.a0 && lp.a1 == pt.a1) {
        ++found;
        break;
      }
    }
  }
  CHECK(found == tight.size());
}

TEST_CASE("region polygon agrees with direct membership") {
  const ProbabilityTable t = ideal_table({0.03, 0.8});
  for (Side side : {Side::alice, Side::bob}) {
    for (int k : {2, 3}) {
      const SideRowSpec spec = make_side_spec(t, side, k);
      const FeasibleRegion region = build_region(spec);
      REQUIRE_FALSE(region.empty);
      // Vertices satisfy the original quadratic constraints (small slack for
      // the linearized boundary arithmetic).
      for (const auto& v : region.vertices) {
        CAPTURE(v.a0, v.a1);
        CHECK(is_feasible(v, spec, 1e-6));
      }
      // The enumerated points track the region bounding box (the local
      // discretization slack admits at most a band of about one spacing),
      // and no polygon vertex is lost to discretization.
      const double spacing = kAmpCap / 120.0;
      const double pad = 2.0 * spacing + 1e-9;
      const auto points = enumerate_feasible(spec, 121);
      REQUIRE_FALSE(points.empty());
      for (const auto& pt : points) {
        CHECK(pt.a0 >= region.lo0 - pad);
        CHECK(pt.a0 <= region.hi0 + pad);
        CHECK(pt.a1 >= region.lo1 - pad);
        CHECK(pt.a1 <= region.hi1 + pad);
      }
      for (const auto& v : region.vertices) {
        bool covered = false;
        for (const auto& pt : points) {
          if (std::abs(pt.a0 - v.a0) <= spacing + 1e-9 &&
              std::abs(pt.a1 - v.a1) <= spacing + 1e-9) {
            covered = true;
            break;
          }
        }
        CAPTURE(v.a0, v.a1);
        CHECK(covered);
      }
    }
  }
}

TEST_CASE("grid refinement tolerance is documented and monotone") {
  const ProbabilityTable t = ideal_table({0.01, 0.5});
  const SideRowSpec spec = make_side_spec(t, Side::alice, 2);
  CHECK(grid_epsilon(spec, 301) > kEps);
  CHECK(grid_epsilon(spec, 601) < grid_epsilon(spec, 301));
  CHECK_THROWS_AS(enumerate_feasible(spec, 1), TableError);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rfimdi/common.hpp"
#include "rfimdi/inner_product.hpp"

using namespace rfimdi;
using Catch::Matchers::WithinAbs;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PhaseSystem point_system(double x22, double x23, double x32, double x33) {
  PhaseSystem sys;
  sys.intervals[0] = {x22, x22};
  sys.intervals[1] = {x23, x23};
  sys.intervals[2] = {x32, x32};
  sys.intervals[3] = {x33, x33};
  return sys;
}

PhaseSystem ideal_point_system() {
  return point_system(kInvSqrt2, -kInvSqrt2, kInvSqrt2, kInvSqrt2);
}

}  // namespace

TEST_CASE("the known solution of the ideal system is feasible") {
  const PhaseSystem sys = ideal_point_system();
  CHECK(feasible_at(1.0, kPi / 4.0, 3.0 * kPi / 4.0, -kPi / 4.0, sys, 1e-9));
}

TEST_CASE("no reduced modulus fits the ideal system on a fine angle grid") {
  const PhaseSystem sys = ideal_point_system();
  const double r = 0.8;
  const double step = 0.1 * kPi / 180.0;
  // The first constraint alone already excludes every grid angle, which
  // rules out every (u, v, w) triple on the grid.
  double best_gap = 1e9;
  double best_u = 0.0;
  for (double u = -kPi; u < kPi; u += step) {
    const double gap = std::abs(r * std::cos(u) - kInvSqrt2);
    if (gap < best_gap) {
      best_gap = gap;
      best_u = u;
    }
  }
  CHECK(best_gap > 1e-9);
  CHECK_FALSE(
      feasible_at(r, best_u, 3.0 * kPi / 4.0, -kPi / 4.0, sys, 1e-9));
}

TEST_CASE("zero modulus satisfies vacuous intervals anywhere") {
  PhaseSystem sys;
  for (auto& iv : sys.intervals) iv = {-1.0, 1.0};
  CHECK(feasible_at(0.0, 0.3, 1.7, -2.9, sys, 1e-9));
  CHECK(min_modulus_rfi(sys).omega == 0.0);
}

TEST_CASE("ideal system certifies a near-unit modulus") {
  const InnerProductBound bound = min_modulus_rfi(ideal_point_system());
  CHECK(bound.omega >= 0.997);
  CHECK(bound.omega <= 1.0);
  // Witness feasibility within the documented slack (quantization only).
  CHECK(feasible_at(bound.witness.r, bound.witness.u, bound.witness.v,
                    bound.witness.w, ideal_point_system(), 2e-3));
}

TEST_CASE("uniform positive intervals force the modulus") {
  PhaseSystem sys;
  for (auto& iv : sys.intervals) iv = {0.9, 1.0};
  const InnerProductBound bound = min_modulus_rfi(sys);
  CHECK_THAT(bound.omega, WithinAbs(0.9, 2e-3 + 1e-12));
}

TEST_CASE("identical point intervals return the point") {
  for (double x : {0.0, 0.3, 0.55, 1.0}) {
    PhaseSystem sys = point_system(x, x, x, x);
    const InnerProductBound bound = min_modulus_rfi(sys);
    CAPTURE(x);
    CHECK_THAT(bound.omega, WithinAbs(x, 2e-3 + 1e-12));
  }
}

TEST_CASE("contradictory intervals raise an inconsistency") {
  // First three pairs pin u = v = w = 0 (mod 2pi); the composite then equals
  // zero as well, but its interval demands cos = -1.
  PhaseSystem sys = point_system(1.0, 1.0, 1.0, -1.0);
  CHECK_THROWS_AS(min_modulus_rfi(sys), InconsistentError);
}

TEST_CASE("superset intervals never certify more") {
  const PhaseSystem tight = ideal_point_system();
  PhaseSystem loose = tight;
  for (auto& iv : loose.intervals) {
    iv.lower -= 0.05;
    iv.upper += 0.05;
  }
  const double omega_tight = min_modulus_rfi(tight).omega;
  const double omega_loose = min_modulus_rfi(loose).omega;
  CHECK(omega_loose <= omega_tight + 1e-12);
}

TEST_CASE("swapping the mixed pairs leaves the bound unchanged") {
  // Channel-shaped system (cos T, -sin T, sin T, cos T): the swap is the
  // mirrored frame rotation, so the certified modulus must match exactly.
  const double t = 0.7;
  PhaseSystem sys =
      point_system(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  PhaseSystem swapped = sys;
  std::swap(swapped.intervals[1], swapped.intervals[2]);
  CHECK(min_modulus_rfi(sys).omega == min_modulus_rfi(swapped).omega);
}

TEST_CASE("grid sweep engine is sound but coarser") {
  const PhaseSystem sys = ideal_point_system();
  const InnerProductBound exact = min_modulus_rfi(sys);
  const InnerProductBound grid = min_modulus_rfi_grid(sys, {1e-3, 1.0, kEps});
  // Both certify lower bounds on the same minimum; the grid engine loses
  // tightness to its Lipschitz slack but must stay at or below the truth.
  CHECK(grid.omega <= exact.omega + 1e-12);
  CHECK(grid.omega >= 0.9);
}

TEST_CASE("baseline bound covers both signed branches") {
  CHECK(min_modulus_baseline({-1.0, -1.0}).omega == 1.0);
  CHECK(min_modulus_baseline({-0.3, 0.4}).omega == 0.0);
  CHECK_THAT(min_modulus_baseline({0.7071, 0.7071}).omega,
             WithinAbs(0.7071, 1e-12));
  CHECK_THAT(min_modulus_baseline({0.2, 0.9}).omega, WithinAbs(0.2, 1e-12));
  CHECK_THAT(min_modulus_baseline({-0.9, -0.2}).omega, WithinAbs(0.2, 1e-12));
}

TEST_CASE("sweep settings are validated") {
  PhaseSystem sys = ideal_point_system();
  CHECK_THROWS_AS(min_modulus_rfi(sys, {0.0, kEps}), TableError);
  CHECK_THROWS_AS(min_modulus_rfi(sys, {0.9, kEps}), TableError);
}

TEST_CASE("witness sits at or above the certified threshold") {
  PhaseSystem sys;
  for (auto& iv : sys.intervals) iv = {0.9, 1.0};
  const InnerProductBound bound = min_modulus_rfi(sys);
  CHECK(bound.witness.r >= bound.omega);
  CHECK(bound.witness.r <= 1.0);
  CHECK(feasible_at(bound.witness.r, bound.witness.u, bound.witness.v,
                    bound.witness.w, sys, 2e-3));
}

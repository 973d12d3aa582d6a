#pragma once

// Certified lower bound on r = |<Gamma00|Gamma11>| from the four phase
// intervals.
//
// Writing <Gamma00|Gamma11> = r e^{i delta}, the four checking pairs bound
//   r cos(u), r cos(v), r cos(w), r cos(v + w - u)
// where u, v, w absorb the unknown state phases (pair (2,2) -> u,
// (2,3) -> v, (3,2) -> w) and the (3,3) phase is structurally v + w - u.
// The certified bound is the smallest r for which some angle assignment puts
// all four products inside their intervals; any true attack must realize one
// such assignment, so true r >= omega.
//
// The default engine sweeps r upward in closed bands [r_i - dr, r_i] and
// solves each band exactly: every constraint becomes an arc constraint
// phi in +-[lo, hi] on the circle, and the composite condition is checked by
// real interval arithmetic over the 8 sign choices and the possible 2*pi
// shifts. No angle discretization error; the only quantization is dr itself,
// and returning the lower band edge keeps omega conservative. A literal
// angle-grid engine (1 degree grid + Lipschitz slack) is kept for comparison.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rfimdi/common.hpp"
#include "rfimdi/phase_bounds.hpp"

namespace rfimdi {

// Intervals indexed by checking pair: [0]=(2,2), [1]=(2,3), [2]=(3,2),
// [3]=(3,3).
struct PhaseSystem {
  std::array<PhaseInterval, 4> intervals{};
};

inline bool feasible_at(double r, double u, double v, double w,
                        const PhaseSystem& sys, double slack) {
  const double vals[4] = {r * std::cos(u), r * std::cos(v), r * std::cos(w),
                          r * std::cos(v + w - u)};
  for (int i = 0; i < 4; ++i) {
    if (vals[i] < sys.intervals[i].lower - slack ||
        vals[i] > sys.intervals[i].upper + slack) {
      return false;
    }
  }
  return true;
}

struct Witness {
  double r = 0.0;
  double u = 0.0, v = 0.0, w = 0.0;
  double phase_a() const { return u; }
  double phase_b() const { return wrap_angle(v - u); }
  double phase_c() const { return wrap_angle(w - u); }
};

struct InnerProductBound {
  double omega = 0.0;
  Witness witness;
};

namespace detail {

// Arc {phi in [lo, hi]} within [0, pi]; the full constraint set is the
// symmetric union +-[lo, hi].
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
};

// Angles phi with r*cos(phi) in [bound_lo, bound_hi] for SOME r in [rl, rh].
// Allowing each constraint its own r within the band is a relaxation, which
// keeps the sweep conservative.
inline Arc band_arc(double bound_lo, double bound_hi, double rl, double rh) {
  Arc arc;
  const double ra = std::max(rl, 0.0);
  if (bound_lo > rh || bound_hi < -rh) return arc;  // unreachable
  double c1;  // smallest reachable cosine
  if (bound_lo >= 0.0) {
    c1 = bound_lo / rh;
  } else {
    c1 = (ra == 0.0) ? -1.0 : std::max(-1.0, bound_lo / ra);
  }
  double c2;  // largest reachable cosine
  if (bound_hi < 0.0) {
    c2 = bound_hi / rh;
  } else {
    c2 = (ra == 0.0) ? 1.0 : std::min(1.0, bound_hi / ra);
  }
  c1 = std::max(c1, -1.0);
  c2 = std::min(c2, 1.0);
  if (c1 > c2) return arc;
  arc.lo = std::acos(c2);
  arc.hi = std::acos(c1);
  arc.empty = false;
  return arc;
}

struct Interval1D {
  double lo = 0.0;
  double hi = 0.0;
};

inline Interval1D signed_arc(const Arc& a, int sign) {
  if (sign >= 0) return {a.lo, a.hi};
  return {-a.hi, -a.lo};
}

struct ComboSolution {
  int su = 1, sv = 1, sw = 1, st = 1;
  int shift = 0;  // composite 2*pi multiple
  Interval1D composite;  // achievable v + w - u range for this sign choice
  Interval1D overlap;    // intersection with the shifted target arc
};

// Exact feasibility of the arc system: u in +-Au, v in +-Av, w in +-Aw,
// v + w - u in +-At (mod 2*pi).
inline std::optional<ComboSolution> solve_arc_system(const Arc& au,
                                                     const Arc& av,
                                                     const Arc& aw,
                                                     const Arc& at) {
  if (au.empty || av.empty || aw.empty || at.empty) return std::nullopt;
  for (int su : {1, -1}) {
    const Interval1D iu = signed_arc(au, su);
    for (int sv : {1, -1}) {
      const Interval1D iv = signed_arc(av, sv);
      for (int sw : {1, -1}) {
        const Interval1D iw = signed_arc(aw, sw);
        const Interval1D comp{iv.lo + iw.lo - iu.hi, iv.hi + iw.hi - iu.lo};
        for (int st : {1, -1}) {
          const Interval1D it = signed_arc(at, st);
          for (int shift : {-1, 0, 1}) {
            const double tlo = it.lo + 2.0 * kPi * shift;
            const double thi = it.hi + 2.0 * kPi * shift;
            const double lo = std::max(comp.lo, tlo);
            const double hi = std::min(comp.hi, thi);
            if (lo <= hi) {
              return ComboSolution{su, sv, sw, st, shift, comp, {lo, hi}};
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

// Recover concrete angles for a solved combo: pick the composite target in
// the overlap, then clamp u, v, w through the chain v + w - u = t.
inline Witness build_witness(const ComboSolution& sol, const Arc& au,
                             const Arc& av, const Arc& aw, double r) {
  const double t = 0.5 * (sol.overlap.lo + sol.overlap.hi);
  const Interval1D iu = signed_arc(au, sol.su);
  const Interval1D iv = signed_arc(av, sol.sv);
  const Interval1D iw = signed_arc(aw, sol.sw);
  // u must allow v + w = t + u with v + w in [iv.lo+iw.lo, iv.hi+iw.hi].
  double ulo = std::max(iu.lo, iv.lo + iw.lo - t);
  double uhi = std::min(iu.hi, iv.hi + iw.hi - t);
  const double u = 0.5 * (ulo + uhi);
  double vlo = std::max(iv.lo, t + u - iw.hi);
  double vhi = std::min(iv.hi, t + u - iw.lo);
  const double v = 0.5 * (vlo + vhi);
  const double w = t + u - v;
  return Witness{r, u, v, w};
}

inline std::array<Arc, 4> band_arcs(const PhaseSystem& sys, double rl,
                                    double rh, double eps) {
  std::array<Arc, 4> arcs;
  for (int i = 0; i < 4; ++i) {
    arcs[i] = band_arc(sys.intervals[i].lower - eps,
                       sys.intervals[i].upper + eps, rl, rh);
  }
  return arcs;
}

}  // namespace detail

struct SweepSettings {
  double r_step = 1e-3;
  double eps = kEps;
};

// Exact-band sweep (default engine).
inline InnerProductBound min_modulus_rfi(const PhaseSystem& sys,
                                         const SweepSettings& settings = {}) {
  const double dr = settings.r_step;
  const double eps = settings.eps;
  if (!(dr > 0.0 && dr <= 0.5)) throw TableError("r_step must be in (0, 0.5]");
  // r = 0 is an exact point: feasible iff every interval straddles zero.
  bool zero_ok = true;
  for (const PhaseInterval& iv : sys.intervals) {
    if (iv.lower - eps > 0.0 || iv.upper + eps < 0.0) zero_ok = false;
  }
  if (zero_ok) return InnerProductBound{0.0, Witness{0.0, 0.0, 0.0, 0.0}};

  const int steps = static_cast<int>(std::ceil(1.0 / dr));
  for (int i = 1; i <= steps; ++i) {
    const double rl = (i - 1) * dr;
    const double rh = std::min(1.0, i * dr);
    const auto arcs = detail::band_arcs(sys, rl, rh, eps);
    const auto sol = detail::solve_arc_system(arcs[0], arcs[1], arcs[2], arcs[3]);
    if (sol) {
      const double omega = std::max(0.0, rl);
      Witness wit =
          detail::build_witness(*sol, arcs[0], arcs[1], arcs[2], 0.5 * (rl + rh));
      return InnerProductBound{omega, wit};
    }
  }
  throw InconsistentError(
      "phase system is infeasible for every r in [0, 1]; the four intervals "
      "are mutually contradictory");
}

struct GridSweepSettings {
  double r_step = 1e-3;
  double angle_step_deg = 1.0;
  double eps = kEps;
};

// Literal angle-grid engine: scan a uniform angle grid restricted to the
// per-constraint arcs, with Lipschitz slack r * (half grid diagonal) so no
// feasible point is missed. Kept for comparison; coarser than the band
// engine by design.
inline InnerProductBound min_modulus_rfi_grid(
    const PhaseSystem& sys, const GridSweepSettings& settings = {}) {
  const double dr = settings.r_step;
  if (!(dr > 0.0 && dr <= 0.5)) throw TableError("r_step must be in (0, 0.5]");
  const double step = settings.angle_step_deg * kPi / 180.0;
  if (!(step > 0.0)) throw TableError("angle step must be positive");
  const double half_diag = step * std::sqrt(3.0) / 2.0;

  const auto arc_points = [step](const detail::Arc& arc) {
    std::vector<double> pts;
    if (arc.empty) return pts;
    for (int sign : {1, -1}) {
      const detail::Interval1D iv = detail::signed_arc(arc, sign);
      for (double x = iv.lo; x < iv.hi + step; x += step) {
        pts.push_back(std::min(x, iv.hi));
      }
    }
    return pts;
  };

  const int steps = static_cast<int>(std::ceil(1.0 / dr));
  for (int i = 0; i <= steps; ++i) {
    const double r = std::min(1.0, i * dr);
    const double slack = r * half_diag + settings.eps;
    std::array<detail::Arc, 4> arcs;
    bool any_empty = false;
    for (int c = 0; c < 4; ++c) {
      arcs[c] = detail::band_arc(sys.intervals[c].lower - slack,
                                 sys.intervals[c].upper + slack, r, r);
      if (arcs[c].empty) any_empty = true;
    }
    if (any_empty) continue;
    const std::vector<double> us = arc_points(arcs[0]);
    const std::vector<double> vs = arc_points(arcs[1]);
    const std::vector<double> ws = arc_points(arcs[2]);
    for (double u : us) {
      for (double v : vs) {
        for (double w : ws) {
          if (feasible_at(r, u, v, w, sys, slack)) {
            const double omega = std::max(0.0, r - dr);
            return InnerProductBound{omega, Witness{r, u, v, w}};
          }
        }
      }
    }
  }
  throw InconsistentError(
      "phase system is infeasible for every r in [0, 1]; the four intervals "
      "are mutually contradictory");
}

// Single-interval baseline (no second checking state): a strictly positive
// lower bound or strictly negative upper bound on r cos(phase) forces
// r >= |that bound| since |cos| <= 1.
inline InnerProductBound min_modulus_baseline(const PhaseInterval& iv22) {
  const double omega =
      std::clamp(std::max({0.0, iv22.lower, -iv22.upper}), 0.0, 1.0);
  const double u = (iv22.lower >= -iv22.upper) ? 0.0 : kPi;
  return InnerProductBound{omega, Witness{omega, u, u, u}};
}

}  // namespace rfimdi

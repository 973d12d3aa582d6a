#pragma once

// Feasible set of checking-state superposition amplitudes (a0, a1) for one
// side and one checking index, given the observed table.
//
// Writing the checking state as a0|enc0> + a1*e^{i phase}|enc1> and taking the
// squared norm of the induced relation between Eve's post-measurement states,
// each encoding row/column n yields
//     |p_kn - w0*a0^2 - w1*a1^2| <= 2*sqrt(w0*w1)*a0*a1 + eps
// with w0, w1 the corresponding encoding probabilities and the unknown phased
// overlap relaxed to [-1, 1]. Together with the normalization relaxation
// (a0-a1)^2 <= 1 <= (a0+a1)^2 and the box [0, kAmpCap]^2 this defines the set.
//
// Key identity used throughout: with q0 = sqrt(w0)*a0, q1 = sqrt(w1)*a1 >= 0,
//     |p - q0^2 - q1^2| <= 2*q0*q1 + eps
//       <=>  |q0 - q1| <= sqrt(p + eps)  AND  q0 + q1 >= sqrt(max(0, p - eps))
// so the set is an intersection of half-planes: an exact convex polygon.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rfimdi/common.hpp"
#include "rfimdi/table.hpp"

namespace rfimdi {

struct CoefficientPoint {
  double a0 = 0.0;
  double a1 = 0.0;
};

enum class Side { alice, bob };

// One scalar constraint row: target probability plus the two weights.
struct ConstraintRow {
  double t = 0.0;
  double w0 = 0.0;
  double w1 = 0.0;
};

struct SideRowSpec {
  Side side = Side::alice;
  int k = 2;  // checking index
  std::array<ConstraintRow, 2> rows{};
};

inline SideRowSpec make_side_spec(const ProbabilityTable& table, Side side,
                                  int k) {
  SideRowSpec s;
  s.side = side;
  s.k = k;
  if (side == Side::alice) {
    s.rows[0] = {table.p[k][0], table.p[0][0], table.p[1][0]};
    s.rows[1] = {table.p[k][1], table.p[0][1], table.p[1][1]};
  } else {
    s.rows[0] = {table.p[0][k], table.p[0][0], table.p[0][1]};
    s.rows[1] = {table.p[1][k], table.p[1][0], table.p[1][1]};
  }
  return s;
}

// Membership in the original (quadratic) form.
inline bool is_feasible(const CoefficientPoint& pt, const SideRowSpec& spec,
                        double eps = kEps) {
  const double a0 = pt.a0;
  const double a1 = pt.a1;
  if (!(a0 >= 0.0 && a1 >= 0.0 && a0 <= kAmpCap && a1 <= kAmpCap)) {
    return false;
  }
  const double d = a0 - a1;
  const double sum = a0 + a1;
  if (d * d > 1.0 + eps) return false;
  if (sum * sum < 1.0 - eps) return false;
  for (const ConstraintRow& row : spec.rows) {
    const double lhs = std::abs(row.t - row.w0 * a0 * a0 - row.w1 * a1 * a1);
    const double rhs = 2.0 * std::sqrt(row.w0 * row.w1) * a0 * a1 + eps;
    if (lhs > rhs) return false;
  }
  return true;
}

// Half-plane nx*a0 + ny*a1 <= c.
struct HalfPlane {
  double nx = 0.0;
  double ny = 0.0;
  double c = 0.0;
};

// Exact linearization of the feasible set (see header comment).
inline std::vector<HalfPlane> feasible_halfplanes(const SideRowSpec& spec,
                                                  double eps = kEps) {
  std::vector<HalfPlane> hp;
  hp.reserve(13);
  hp.push_back({-1.0, 0.0, 0.0});       // a0 >= 0
  hp.push_back({0.0, -1.0, 0.0});       // a1 >= 0
  hp.push_back({1.0, 0.0, kAmpCap});    // a0 <= cap
  hp.push_back({0.0, 1.0, kAmpCap});    // a1 <= cap
  const double norm_hi = std::sqrt(1.0 + eps);
  const double norm_lo = std::sqrt(std::max(0.0, 1.0 - eps));
  hp.push_back({1.0, -1.0, norm_hi});   // |a0 - a1| <= sqrt(1+eps)
  hp.push_back({-1.0, 1.0, norm_hi});
  hp.push_back({-1.0, -1.0, -norm_lo}); // a0 + a1 >= sqrt(1-eps)
  for (const ConstraintRow& row : spec.rows) {
    const double al = std::sqrt(row.w0);
    const double be = std::sqrt(row.w1);
    const double hi = std::sqrt(row.t + eps);
    const double lo = std::sqrt(std::max(0.0, row.t - eps));
    if (al == 0.0 && be == 0.0) {
      if (row.t > eps) hp.push_back({0.0, 0.0, -1.0});  // infeasible marker
      continue;
    }
    hp.push_back({al, -be, hi});
    hp.push_back({-al, be, hi});
    hp.push_back({-al, -be, -lo});
  }
  return hp;
}

namespace detail {

inline bool point_in_halfplanes(const std::vector<HalfPlane>& hp, double a0,
                                double a1, double tol) {
  for (const HalfPlane& h : hp) {
    if (h.nx * a0 + h.ny * a1 > h.c + tol) return false;
  }
  return true;
}

}  // namespace detail

// Convex polygon with precomputed vertices and bounding box.
struct FeasibleRegion {
  SideRowSpec spec;
  double eps = kEps;
  std::vector<HalfPlane> halfplanes;
  std::vector<CoefficientPoint> vertices;
  double lo0 = 0.0, hi0 = 0.0, lo1 = 0.0, hi1 = 0.0;  // vertex bounding box
  bool empty = true;

  bool contains(double a0, double a1, double tol = 1e-12) const {
    return detail::point_in_halfplanes(halfplanes, a0, a1, tol);
  }
};

// Enumerate polygon vertices by pairwise boundary-line intersection filtered
// by membership in every half-plane.
inline FeasibleRegion build_region(const SideRowSpec& spec, double eps = kEps) {
  FeasibleRegion region;
  region.spec = spec;
  region.eps = eps;
  region.halfplanes = feasible_halfplanes(spec, eps);
  const auto& hp = region.halfplanes;
  const double member_tol = 1e-11;
  std::vector<CoefficientPoint> verts;
  for (std::size_t i = 0; i < hp.size(); ++i) {
    for (std::size_t j = i + 1; j < hp.size(); ++j) {
      const double det = hp[i].nx * hp[j].ny - hp[i].ny * hp[j].nx;
      if (std::abs(det) < 1e-14) continue;
      const double a0 = (hp[i].c * hp[j].ny - hp[i].ny * hp[j].c) / det;
      const double a1 = (hp[i].nx * hp[j].c - hp[i].c * hp[j].nx) / det;
      if (!std::isfinite(a0) || !std::isfinite(a1)) continue;
      if (!detail::point_in_halfplanes(hp, a0, a1, member_tol)) continue;
      bool duplicate = false;
      for (const CoefficientPoint& v : verts) {
        if (std::abs(v.a0 - a0) < 1e-10 && std::abs(v.a1 - a1) < 1e-10) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) verts.push_back({a0, a1});
    }
  }
  region.vertices = std::move(verts);
  region.empty = region.vertices.empty();
  if (!region.empty) {
    region.lo0 = region.hi0 = region.vertices[0].a0;
    region.lo1 = region.hi1 = region.vertices[0].a1;
    for (const CoefficientPoint& v : region.vertices) {
      region.lo0 = std::min(region.lo0, v.a0);
      region.hi0 = std::max(region.hi0, v.a0);
      region.lo1 = std::min(region.lo1, v.a1);
      region.hi1 = std::max(region.hi1, v.a1);
    }
  }
  return region;
}

// Lipschitz bound on the constraint functions over the box, used to inflate
// the tolerance so a grid scan cannot exclude any truly feasible point.
inline double constraint_lipschitz(const SideRowSpec& spec) {
  const double sqrt2 = std::sqrt(2.0);
  double lip = 4.0 * kAmpCap * sqrt2;  // normalization rows
  for (const ConstraintRow& row : spec.rows) {
    const double cross = std::sqrt(row.w0 * row.w1);
    const double row_lip =
        2.0 * sqrt2 * kAmpCap * (std::max(row.w0, row.w1) + cross);
    lip = std::max(lip, row_lip);
  }
  return lip;
}

inline double grid_epsilon(const SideRowSpec& spec, int grid_n,
                           double eps = kEps) {
  const double spacing = kAmpCap / static_cast<double>(grid_n - 1);
  const double half_diag = spacing * std::sqrt(2.0) / 2.0;
  return eps + constraint_lipschitz(spec) * half_diag;
}

// Point-local variant of the discretization slack: each constraint's gradient
// is bounded over the ball of radius half_diag around the point, so the grid
// point nearest any truly feasible point always passes, while the admitted
// band stays proportional to the grid spacing. grid_epsilon above is the
// uniform (box-global) envelope of this rule, kept as the documented
// worst-case slack.
inline bool grid_feasible(const CoefficientPoint& pt, const SideRowSpec& spec,
                          double eps, double half_diag) {
  const double a0 = pt.a0;
  const double a1 = pt.a1;
  if (!(a0 >= 0.0 && a1 >= 0.0 && a0 <= kAmpCap && a1 <= kAmpCap)) {
    return false;
  }
  const double lin_slack = std::sqrt(2.0) * half_diag;
  if (std::abs(a0 - a1) > 1.0 + eps + lin_slack) return false;
  if (a0 + a1 < 1.0 - eps - lin_slack) return false;
  for (const ConstraintRow& row : spec.rows) {
    const double cross = std::sqrt(row.w0 * row.w1);
    const double gx =
        2.0 * row.w0 * (a0 + half_diag) + 2.0 * cross * (a1 + half_diag);
    const double gy =
        2.0 * row.w1 * (a1 + half_diag) + 2.0 * cross * (a0 + half_diag);
    const double slack = std::hypot(gx, gy) * half_diag;
    const double lhs = std::abs(row.t - row.w0 * a0 * a0 - row.w1 * a1 * a1);
    if (lhs > 2.0 * cross * a0 * a1 + eps + slack) return false;
  }
  return true;
}

// Grid-scan enumeration over [0, kAmpCap]^2 with the point-local tolerance.
// Empty result signals a table inconsistent with a two-dimensional source.
inline std::vector<CoefficientPoint> enumerate_feasible(
    const SideRowSpec& spec, int grid_n, double eps = kEps) {
  if (grid_n < 2) throw TableError("grid_n must be >= 2");
  const double spacing = kAmpCap / static_cast<double>(grid_n - 1);
  const double half_diag = spacing * std::sqrt(2.0) / 2.0;
  std::vector<CoefficientPoint> points;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const CoefficientPoint pt{i * spacing, j * spacing};
      if (grid_feasible(pt, spec, eps, half_diag)) points.push_back(pt);
    }
  }
  return points;
}

struct ConsistencyReport {
  bool ok = true;
  std::vector<std::string> failures;
};

// The two-dimensional-source assumption is testable: every side/checking-index
// combination must admit at least one coefficient point.
inline ConsistencyReport consistency_check(const ProbabilityTable& table,
                                           double eps = kEps) {
  ConsistencyReport report;
  const int k_max = table.size == 4 ? 3 : 2;
  for (Side side : {Side::alice, Side::bob}) {
    for (int k = 2; k <= k_max; ++k) {
      const FeasibleRegion region = build_region(make_side_spec(table, side, k), eps);
      if (region.empty) {
        report.ok = false;
        report.failures.push_back(
            std::string(side == Side::alice ? "Alice" : "Bob") +
            " checking index " + std::to_string(k) +
            ": no coefficient point is consistent with the observations");
      }
    }
  }
  return report;
}

inline void require_consistent(const ProbabilityTable& table,
                               double eps = kEps) {
  const ConsistencyReport report = consistency_check(table, eps);
  if (!report.ok) {
    std::string msg =
        "observations inconsistent with two-dimensional source assumption:";
    for (const auto& f : report.failures) msg += "\n  " + f;
    throw InconsistentError(msg);
  }
}

}  // namespace rfimdi

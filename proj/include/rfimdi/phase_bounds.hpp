#pragma once

// Pairwise bounds on Re[e^{i Phi_kl} <Gamma00|Gamma11>] for a checking pair
// (k, l), and their conservative extremization over the coefficient polygons.
//
// Decomposing Eve's post-measurement state for the checking pair over the four
// encoding pairs and applying the triangle inequality to the norm gives, at a
// coefficient point (a, b):
//
//   upper =  ((sqrt(p_kl) + X)^2 - p00 a0^2 b0^2 - p11 a1^2 b1^2) / N
//   lower =  ((max(0, sqrt(p_kl) - X))^2 - p00 a0^2 b0^2 - p11 a1^2 b1^2) / N
//
// with X = sqrt(p01) a0 b1 + sqrt(p10) a1 b0 (the two cross-encoding terms,
// treated adversarially) and N = 2 sqrt(p00 p11) a0 a1 b0 b1. The max(0, .)
// guards the reverse-triangle step: when the cross terms could swallow the
// checking amplitude entirely, only norm >= 0 is known.
//
// The true coefficients are unknown but guaranteed inside the feasible
// regions, so a valid interval for the true quantity is
//   [ min over feasible (a,b) of lower,  max over feasible (a,b) of upper ].

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "rfimdi/coefficients.hpp"
#include "rfimdi/common.hpp"
#include "rfimdi/table.hpp"

namespace rfimdi {

struct PairBoundInput {
  double p_kl = 0.0;
  double p00 = 0.0, p11 = 0.0, p01 = 0.0, p10 = 0.0;
  CoefficientPoint a;  // Alice row-k amplitudes
  CoefficientPoint b;  // Bob column-l amplitudes
};

inline double upper_bound_at(const PairBoundInput& in) {
  const double n =
      2.0 * std::sqrt(in.p00 * in.p11) * in.a.a0 * in.a.a1 * in.b.a0 * in.b.a1;
  if (n <= kEpsDenom) return 1.0;  // vacuous: no information available
  const double cross =
      std::sqrt(in.p01) * in.a.a0 * in.b.a1 + std::sqrt(in.p10) * in.a.a1 * in.b.a0;
  const double head = std::sqrt(in.p_kl) + cross;
  const double val = (head * head - in.p00 * in.a.a0 * in.a.a0 * in.b.a0 * in.b.a0 -
                      in.p11 * in.a.a1 * in.a.a1 * in.b.a1 * in.b.a1) /
                     n;
  // The bounded quantity always lies in [-1, 1]; clamping both ends keeps
  // lower_bound_at <= upper_bound_at for arbitrary (even infeasible) inputs.
  return std::clamp(val, -1.0, 1.0);
}

inline double lower_bound_at(const PairBoundInput& in) {
  const double n =
      2.0 * std::sqrt(in.p00 * in.p11) * in.a.a0 * in.a.a1 * in.b.a0 * in.b.a1;
  if (n <= kEpsDenom) return -1.0;
  const double cross =
      std::sqrt(in.p01) * in.a.a0 * in.b.a1 + std::sqrt(in.p10) * in.a.a1 * in.b.a0;
  const double head = std::max(0.0, std::sqrt(in.p_kl) - cross);
  const double val = (head * head - in.p00 * in.a.a0 * in.a.a0 * in.b.a0 * in.b.a0 -
                      in.p11 * in.a.a1 * in.a.a1 * in.b.a1 * in.b.a1) /
                     n;
  return std::clamp(val, -1.0, 1.0);
}

struct PhaseInterval {
  double lower = -1.0;
  double upper = 1.0;
};

struct CheckingPairId {
  int k = 2;  // Alice checking index
  int l = 2;  // Bob checking index
};

enum class Engine { exact, grid };

struct BoundSettings {
  Engine engine = Engine::exact;
  int grid_coeff = 301;
  double eps = kEps;
};

struct PairDiagnostics {
  CoefficientPoint a_at_lower, b_at_lower;
  CoefficientPoint a_at_upper, b_at_upper;
  double raw_lower = 0.0;  // before clamping to [-1, 1]
  double raw_upper = 0.0;
  bool cap_hit = false;    // an extremal point sits on the amplitude cap
};

struct PairResult {
  PhaseInterval interval;
  PairDiagnostics diag;
};

namespace detail {

struct BoundObjective {
  double p_kl, p00, p11, p01, p10;

  double upper(const CoefficientPoint& a, const CoefficientPoint& b) const {
    return upper_bound_at({p_kl, p00, p11, p01, p10, a, b});
  }
  double lower(const CoefficientPoint& a, const CoefficientPoint& b) const {
    return lower_bound_at({p_kl, p00, p11, p01, p10, a, b});
  }
};

struct SeedEval {
  CoefficientPoint a, b;
  double value;
};

// Deterministic pattern search over (a0, a1, b0, b1), constrained to the two
// polygons. sign = +1 maximizes, -1 minimizes.
template <typename F, typename MemberA, typename MemberB>
void pattern_search(F&& objective, MemberA&& member_a, MemberB&& member_b,
                    CoefficientPoint& a, CoefficientPoint& b, double& best,
                    double sign, double step0) {
  static constexpr double dirs[16][4] = {
      {1, 0, 0, 0},  {-1, 0, 0, 0}, {0, 1, 0, 0},  {0, -1, 0, 0},
      {0, 0, 1, 0},  {0, 0, -1, 0}, {0, 0, 0, 1},  {0, 0, 0, -1},
      {1, 1, 0, 0},  {1, -1, 0, 0}, {-1, 1, 0, 0}, {-1, -1, 0, 0},
      {0, 0, 1, 1},  {0, 0, 1, -1}, {0, 0, -1, 1}, {0, 0, -1, -1}};
  double step = step0;
  for (int iter = 0; iter < 200 && step > 1e-10; ++iter) {
    bool improved = false;
    for (const auto& d : dirs) {
      const CoefficientPoint ca{a.a0 + step * d[0], a.a1 + step * d[1]};
      const CoefficientPoint cb{b.a0 + step * d[2], b.a1 + step * d[3]};
      if (!member_a(ca) || !member_b(cb)) continue;
      const double v = objective(ca, cb);
      if (sign * v > sign * best + 1e-15) {
        a = ca;
        b = cb;
        best = v;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
}

// Candidate coefficient points for one side: polygon vertices plus a
// polygon-filtered uniform grid over the vertex bounding box.
inline std::vector<CoefficientPoint> seed_points(const FeasibleRegion& region,
                                                 int per_axis) {
  std::vector<CoefficientPoint> pts = region.vertices;
  const double natural = std::sqrt(0.5);
  if (region.contains(natural, natural, 1e-12)) pts.push_back({natural, natural});
  const double span0 = region.hi0 - region.lo0;
  const double span1 = region.hi1 - region.lo1;
  if (per_axis >= 2 && (span0 > 0.0 || span1 > 0.0)) {
    for (int i = 0; i < per_axis; ++i) {
      for (int j = 0; j < per_axis; ++j) {
        const double a0 = region.lo0 + span0 * i / (per_axis - 1);
        const double a1 = region.lo1 + span1 * j / (per_axis - 1);
        if (region.contains(a0, a1, 1e-12)) pts.push_back({a0, a1});
      }
    }
  }
  return pts;
}

}  // namespace detail

// Extremize the pair bounds over the exact coefficient polygons (default
// engine). Seeds = vertices + filtered grid on both sides; the best seeds are
// refined by deterministic pattern search.
inline PairResult conservative_interval_exact(const ProbabilityTable& table,
                                              CheckingPairId pair,
                                              const BoundSettings& settings) {
  const FeasibleRegion ra =
      build_region(make_side_spec(table, Side::alice, pair.k), settings.eps);
  const FeasibleRegion rb =
      build_region(make_side_spec(table, Side::bob, pair.l), settings.eps);
  if (ra.empty || rb.empty) {
    throw InconsistentError(
        "conservative_interval: empty coefficient region for pair (" +
        std::to_string(pair.k) + "," + std::to_string(pair.l) + ")");
  }
  const detail::BoundObjective obj{table.p[pair.k][pair.l], table.p[0][0],
                                   table.p[1][1], table.p[0][1], table.p[1][0]};

  const int per_axis = std::clamp(settings.grid_coeff / 8, 9, 41);
  std::vector<CoefficientPoint> sa = detail::seed_points(ra, per_axis);
  std::vector<CoefficientPoint> sb = detail::seed_points(rb, per_axis);
  // Cap the seed product, keeping stride deterministic.
  const std::size_t cap = 40000;
  std::size_t stride_a = 1, stride_b = 1;
  while ((sa.size() / stride_a + 1) * (sb.size() / stride_b + 1) > cap) {
    if (sa.size() / stride_a >= sb.size() / stride_b) {
      ++stride_a;
    } else {
      ++stride_b;
    }
  }

  struct Best {
    double value;
    CoefficientPoint a, b;
  };
  std::vector<detail::SeedEval> lows, highs;
  for (std::size_t i = 0; i < sa.size(); i += stride_a) {
    for (std::size_t j = 0; j < sb.size(); j += stride_b) {
      const double lo = obj.lower(sa[i], sb[j]);
      const double hi = obj.upper(sa[i], sb[j]);
      lows.push_back({sa[i], sb[j], lo});
      highs.push_back({sa[i], sb[j], hi});
    }
  }
  auto take_top = [](std::vector<detail::SeedEval>& v, double sign, std::size_t n) {
    std::stable_sort(v.begin(), v.end(),
                     [sign](const detail::SeedEval& x, const detail::SeedEval& y) {
                       return sign * x.value > sign * y.value;
                     });
    if (v.size() > n) v.resize(n);
  };
  take_top(lows, -1.0, 16);
  take_top(highs, +1.0, 16);

  const auto member_a = [&ra](const CoefficientPoint& p) {
    return ra.contains(p.a0, p.a1, 1e-12);
  };
  const auto member_b = [&rb](const CoefficientPoint& p) {
    return rb.contains(p.a0, p.a1, 1e-12);
  };
  const double span = std::max({ra.hi0 - ra.lo0, ra.hi1 - ra.lo1,
                                rb.hi0 - rb.lo0, rb.hi1 - rb.lo1});
  const double step0 = std::max(span / 8.0, 1e-9);
  const auto objective_l = [&obj](const CoefficientPoint& a, const CoefficientPoint& b) {
    return obj.lower(a, b);
  };
  const auto objective_u = [&obj](const CoefficientPoint& a, const CoefficientPoint& b) {
    return obj.upper(a, b);
  };

  Best best_low{lows.front().value, lows.front().a, lows.front().b};
  for (const auto& seed : lows) {
    CoefficientPoint a = seed.a, b = seed.b;
    double v = seed.value;
    detail::pattern_search(objective_l, member_a, member_b, a, b, v, -1.0, step0);
    if (v < best_low.value) best_low = {v, a, b};
  }
  Best best_high{highs.front().value, highs.front().a, highs.front().b};
  for (const auto& seed : highs) {
    CoefficientPoint a = seed.a, b = seed.b;
    double v = seed.value;
    detail::pattern_search(objective_u, member_a, member_b, a, b, v, +1.0, step0);
    if (v > best_high.value) best_high = {v, a, b};
  }

  PairResult result;
  result.diag.raw_lower = best_low.value;
  result.diag.raw_upper = best_high.value;
  result.diag.a_at_lower = best_low.a;
  result.diag.b_at_lower = best_low.b;
  result.diag.a_at_upper = best_high.a;
  result.diag.b_at_upper = best_high.b;
  const auto near_cap = [](const CoefficientPoint& p) {
    return p.a0 >= kAmpCap - 1e-9 || p.a1 >= kAmpCap - 1e-9;
  };
  result.diag.cap_hit = near_cap(best_low.a) || near_cap(best_low.b) ||
                        near_cap(best_high.a) || near_cap(best_high.b);
  result.interval.lower = std::clamp(best_low.value, -1.0, 1.0);
  result.interval.upper = std::clamp(best_high.value, -1.0, 1.0);
  return result;
}

// Discretized engine: product scan over the two inflated grid enumerations
// followed by a single pattern-search refinement from the best grid point.
inline PairResult conservative_interval_grid(const ProbabilityTable& table,
                                             CheckingPairId pair,
                                             const BoundSettings& settings) {
  const SideRowSpec spec_a = make_side_spec(table, Side::alice, pair.k);
  const SideRowSpec spec_b = make_side_spec(table, Side::bob, pair.l);
  std::vector<CoefficientPoint> la =
      enumerate_feasible(spec_a, settings.grid_coeff, settings.eps);
  std::vector<CoefficientPoint> lb =
      enumerate_feasible(spec_b, settings.grid_coeff, settings.eps);
  if (la.empty() || lb.empty()) {
    throw InconsistentError(
        "conservative_interval: empty grid enumeration for pair (" +
        std::to_string(pair.k) + "," + std::to_string(pair.l) + ")");
  }
  const detail::BoundObjective obj{table.p[pair.k][pair.l], table.p[0][0],
                                   table.p[1][1], table.p[0][1], table.p[1][0]};
  // Safeguard: keep the product scan bounded on very wide regions.
  const std::size_t cap = 20000000;
  std::size_t stride_a = 1, stride_b = 1;
  while ((la.size() / stride_a + 1) * (lb.size() / stride_b + 1) > cap) {
    if (la.size() / stride_a >= lb.size() / stride_b) {
      ++stride_a;
    } else {
      ++stride_b;
    }
  }
  struct Best {
    double value;
    CoefficientPoint a, b;
  };
  Best lo{std::numeric_limits<double>::infinity(), la[0], lb[0]};
  Best hi{-std::numeric_limits<double>::infinity(), la[0], lb[0]};
  for (std::size_t i = 0; i < la.size(); i += stride_a) {
    for (std::size_t j = 0; j < lb.size(); j += stride_b) {
      const double l = obj.lower(la[i], lb[j]);
      const double u = obj.upper(la[i], lb[j]);
      if (l < lo.value) lo = {l, la[i], lb[j]};
      if (u > hi.value) hi = {u, la[i], lb[j]};
    }
  }
  const double spacing = kAmpCap / static_cast<double>(settings.grid_coeff - 1);
  const double half_diag = spacing * std::sqrt(2.0) / 2.0;
  const auto member_a = [&](const CoefficientPoint& p) {
    return grid_feasible(p, spec_a, settings.eps, half_diag);
  };
  const auto member_b = [&](const CoefficientPoint& p) {
    return grid_feasible(p, spec_b, settings.eps, half_diag);
  };
  const auto objective_l = [&obj](const CoefficientPoint& a, const CoefficientPoint& b) {
    return obj.lower(a, b);
  };
  const auto objective_u = [&obj](const CoefficientPoint& a, const CoefficientPoint& b) {
    return obj.upper(a, b);
  };
  detail::pattern_search(objective_l, member_a, member_b, lo.a, lo.b, lo.value,
                         -1.0, spacing);
  detail::pattern_search(objective_u, member_a, member_b, hi.a, hi.b, hi.value,
                         +1.0, spacing);

  PairResult result;
  result.diag.raw_lower = lo.value;
  result.diag.raw_upper = hi.value;
  result.diag.a_at_lower = lo.a;
  result.diag.b_at_lower = lo.b;
  result.diag.a_at_upper = hi.a;
  result.diag.b_at_upper = hi.b;
  const auto near_cap = [](const CoefficientPoint& p) {
    return p.a0 >= kAmpCap - 1e-9 || p.a1 >= kAmpCap - 1e-9;
  };
  result.diag.cap_hit = near_cap(lo.a) || near_cap(lo.b) || near_cap(hi.a) ||
                        near_cap(hi.b);
  result.interval.lower = std::clamp(lo.value, -1.0, 1.0);
  result.interval.upper = std::clamp(hi.value, -1.0, 1.0);
  return result;
}

inline PairResult conservative_interval(const ProbabilityTable& table,
                                        CheckingPairId pair,
                                        const BoundSettings& settings = {}) {
  if (settings.engine == Engine::grid) {
    return conservative_interval_grid(table, pair, settings);
  }
  return conservative_interval_exact(table, pair, settings);
}

}  // namespace rfimdi

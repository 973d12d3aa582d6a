#pragma once

// Error rates and the final key rate.
//
//   e_bit   = (p01 + p10) / (p00 + p11 + p01 + p10)
//   Delta  <= p00 + p11 - 2 sqrt(p00 p11) * omega   (optimal phase choice)
//   e_phase <= e_bit + Delta / (2 (p00 + p11 + p01 + p10))
//   R       = max(0, 1 - H(e_bit) - H(e_phase))

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "rfimdi/coefficients.hpp"
#include "rfimdi/common.hpp"
#include "rfimdi/inner_product.hpp"
#include "rfimdi/phase_bounds.hpp"
#include "rfimdi/table.hpp"

namespace rfimdi {

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw TableError("binary_entropy domain is [0, 1], got " +
                     std::to_string(x));
  }
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

inline double key_event_total(const ProbabilityTable& t) {
  return t.p[0][0] + t.p[1][1] + t.p[0][1] + t.p[1][0];
}

inline double bit_error_rate(const ProbabilityTable& t) {
  const double s = key_event_total(t);
  if (s <= 0.0) throw TableError("no key events: encoding cells sum to zero");
  return (t.p[0][1] + t.p[1][0]) / s;
}

inline double delta_bound(double p00, double p11, double omega) {
  return p00 + p11 - 2.0 * std::sqrt(p00 * p11) * omega;
}

inline double phase_error_rate(double e_bit, double delta, double s_total) {
  if (s_total <= 0.0) throw TableError("no key events: zero denominator");
  return std::min(1.0, e_bit + delta / (2.0 * s_total));
}

struct AnalysisSettings {
  Mode mode = Mode::rfi;
  Engine engine = Engine::exact;
  int grid_coeff = 301;
  double r_step = 1e-3;
  double angle_step_deg = 1.0;
  double eps = kEps;
};

struct KeyRateReport {
  Mode mode = Mode::rfi;
  Engine engine = Engine::exact;
  double e_bit = 0.0;
  double e_phase = 0.0;
  double omega = 0.0;
  double rate = 0.0;
  // Pair order: (2,2), (2,3), (3,2), (3,3); non-RFI mode fills only [0] and
  // marks the rest vacuous.
  std::array<PhaseInterval, 4> intervals{};
  std::array<PairDiagnostics, 4> pair_diag{};
  int pair_count = 4;
  Witness witness;
  double delta = 0.0;
  double s_total = 0.0;
  double raw_rate = 0.0;        // before clamping at zero
  bool delta_degenerate = false;  // p00*p11 = 0: omega cannot tighten Delta
  bool cap_hit = false;           // some extremal point sat on the amplitude cap
  AnalysisSettings settings;
};

inline KeyRateReport analyze(const ProbabilityTable& table,
                             const AnalysisSettings& settings = {}) {
  require_valid(table, settings.mode);
  require_consistent(table, settings.eps);

  KeyRateReport report;
  report.mode = settings.mode;
  report.engine = settings.engine;
  report.settings = settings;

  const BoundSettings bound_settings{settings.engine, settings.grid_coeff,
                                     settings.eps};
  if (settings.mode == Mode::rfi) {
    const CheckingPairId pairs[4] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    PhaseSystem system;
    for (int i = 0; i < 4; ++i) {
      const PairResult res =
          conservative_interval(table, pairs[i], bound_settings);
      system.intervals[i] = res.interval;
      report.intervals[i] = res.interval;
      report.pair_diag[i] = res.diag;
      report.cap_hit = report.cap_hit || res.diag.cap_hit;
    }
    report.pair_count = 4;
    InnerProductBound bound;
    if (settings.engine == Engine::grid) {
      bound = min_modulus_rfi_grid(
          system, {settings.r_step, settings.angle_step_deg, settings.eps});
    } else {
      bound = min_modulus_rfi(system, {settings.r_step, settings.eps});
    }
    report.omega = bound.omega;
    report.witness = bound.witness;
  } else {
    const PairResult res = conservative_interval(table, {2, 2}, bound_settings);
    report.intervals[0] = res.interval;
    report.pair_diag[0] = res.diag;
    report.cap_hit = res.diag.cap_hit;
    report.intervals[1] = report.intervals[2] = report.intervals[3] =
        PhaseInterval{-1.0, 1.0};
    report.pair_count = 1;
    const InnerProductBound bound = min_modulus_baseline(res.interval);
    report.omega = bound.omega;
    report.witness = bound.witness;
  }

  report.e_bit = bit_error_rate(table);
  report.s_total = key_event_total(table);
  report.delta = delta_bound(table.p[0][0], table.p[1][1], report.omega);
  report.delta_degenerate = (table.p[0][0] * table.p[1][1] == 0.0);
  report.e_phase = phase_error_rate(report.e_bit, report.delta, report.s_total);
  report.raw_rate =
      1.0 - binary_entropy(report.e_bit) - binary_entropy(report.e_phase);
  report.rate = std::max(0.0, report.raw_rate);
  return report;
}

}  // namespace rfimdi

#pragma once

// Misalignment sweep: analyze the noise-model table over a grid of relative
// rotation angles for each requested bit-error level, in a deterministic row
// order suitable for CSV emission (theta outer, e_b inner).

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

#include "rfimdi/channel.hpp"
#include "rfimdi/key_rate.hpp"

namespace rfimdi {

struct SweepRow {
  double theta = 0.0;
  double e_b = 0.0;
  double omega = 0.0;
  double e_bit = 0.0;
  double e_phase = 0.0;
  double rate = 0.0;
  std::array<PhaseInterval, 4> intervals{};  // (2,2),(2,3),(3,2),(3,3)
};

struct SweepSpec {
  std::vector<double> eb_list;
  int theta_steps = 33;  // theta_i = i * pi / (theta_steps - 1)
  bool full_circle = false;
  int jobs = 1;
  AnalysisSettings settings;
};

inline SweepRow analyze_sweep_point(double theta, double e_b,
                                    const AnalysisSettings& settings) {
  const ProbabilityTable table = ideal_table({e_b, theta});
  const KeyRateReport report = analyze(table, settings);
  SweepRow row;
  row.theta = theta;
  row.e_b = e_b;
  row.omega = report.omega;
  row.e_bit = report.e_bit;
  row.e_phase = report.e_phase;
  row.rate = report.rate;
  row.intervals = report.intervals;
  return row;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.theta_steps < 2) throw TableError("sweep needs at least 2 steps");
  if (spec.eb_list.empty()) throw TableError("sweep needs at least one e_b");

  struct Task {
    double theta;
    double e_b;
  };
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(spec.theta_steps) *
                spec.eb_list.size());
  for (int i = 0; i < spec.theta_steps; ++i) {
    const double theta = i * kPi / (spec.theta_steps - 1);
    for (double e_b : spec.eb_list) tasks.push_back({theta, e_b});
  }

  std::vector<SweepRow> rows(tasks.size());
  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      rows[t] = analyze_sweep_point(tasks[t].theta, tasks[t].e_b,
                                    spec.settings);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size();
             t = next.fetch_add(1)) {
          rows[t] = analyze_sweep_point(tasks[t].theta, tasks[t].e_b,
                                        spec.settings);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  if (spec.full_circle) {
    // Mirror theta -> 2*pi - theta. The model obeys an exact reflection: the
    // (2,3) and (3,2) cells trade places while everything else is unchanged,
    // so the mirrored rows reuse the computed half-circle results.
    const std::size_t nb = spec.eb_list.size();
    std::vector<SweepRow> mirrored;
    mirrored.reserve(static_cast<std::size_t>(spec.theta_steps - 2) * nb);
    for (int i = spec.theta_steps - 2; i >= 1; --i) {
      const double theta = 2.0 * kPi - i * kPi / (spec.theta_steps - 1);
      for (std::size_t b = 0; b < nb; ++b) {
        SweepRow row = rows[static_cast<std::size_t>(i) * nb + b];
        row.theta = theta;
        std::swap(row.intervals[1], row.intervals[2]);
        mirrored.push_back(row);
      }
    }
    rows.insert(rows.end(), mirrored.begin(), mirrored.end());
  }
  return rows;
}

}  // namespace rfimdi

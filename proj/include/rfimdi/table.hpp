#pragma once

// ProbabilityTable: the protocol's only observable, a size x size grid of
// conditional probabilities p[i][j] = P(Charlie announces outcome 1 | Alice
// sent state i, Bob sent state j). Indices 0,1 are encoding states; 2 (and 3
// in the reference-frame-independent mode) are checking states.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rfimdi/common.hpp"

namespace rfimdi {

enum class Mode { rfi, nonrfi };

struct ProbabilityTable {
  int size = 4;  // 3 or 4 state indices per side
  std::array<std::array<double, 4>, 4> p{};  // row = Alice, column = Bob

  double at(int i, int j) const { return p[i][j]; }
};

// Total function returning every violation found; empty means valid.
inline std::vector<std::string> validate_table(const ProbabilityTable& t) {
  std::vector<std::string> errors;
  if (t.size != 3 && t.size != 4) {
    errors.push_back("size must be 3 or 4, got " + std::to_string(t.size));
    return errors;
  }
  for (int i = 0; i < t.size; ++i) {
    for (int j = 0; j < t.size; ++j) {
      const double v = t.p[i][j];
      if (!std::isfinite(v)) {
        errors.push_back("entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") is not finite");
      } else if (v < 0.0 || v > 1.0) {
        errors.push_back("entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") out of range [0,1]: " +
                         std::to_string(v));
      }
    }
  }
  return errors;
}

// Mode gate: the four-phase analysis needs both checking states per side.
inline std::vector<std::string> validate_table(const ProbabilityTable& t,
                                               Mode mode) {
  std::vector<std::string> errors = validate_table(t);
  if (mode == Mode::rfi && t.size != 4) {
    errors.push_back("size must be 4 in rfi mode, got " +
                     std::to_string(t.size));
  }
  return errors;
}

inline void require_valid(const ProbabilityTable& t, Mode mode) {
  const auto errors = validate_table(t, mode);
  if (!errors.empty()) {
    std::string msg = "invalid table:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw TableError(msg);
  }
}

}  // namespace rfimdi

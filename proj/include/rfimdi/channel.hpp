#pragma once

// Reference channel model: a depolarization-plus-rotation family parameterized
// directly by the bit error rate e_b and the frame rotation angle theta.
// Encoding rows are rotation-invariant; the checking-pair cells trace the
// rotation through shifted cosines.

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "rfimdi/common.hpp"
#include "rfimdi/table.hpp"

namespace rfimdi {

struct ChannelParams {
  double e_b = 0.0;   // bit error rate in [0, 0.5]
  double theta = 0.0; // relative rotation angle in radians
};

inline void require_valid(const ChannelParams& params) {
  if (!(params.e_b >= 0.0 && params.e_b <= 0.5)) {
    throw TableError("channel e_b must be in [0, 0.5], got " +
                     std::to_string(params.e_b));
  }
  if (!std::isfinite(params.theta)) {
    throw TableError("channel theta must be finite");
  }
}

// Exact probability table of the model. Mixed-cell values are
// (1-e_b)*(1+cos(shifted theta))/4 + e_b/2; encoding-vs-checking cells are
// flat 1/4; the key cells split (1-e_b)/2 vs e_b/2.
inline ProbabilityTable ideal_table(const ChannelParams& params) {
  require_valid(params);
  const double eb = params.e_b;
  const double th = params.theta;
  ProbabilityTable t;
  t.size = 4;
  const double key_same = (1.0 - eb) / 2.0;
  const double key_diff = eb / 2.0;
  const auto mixed = [&](double shift) {
    return (1.0 - eb) * (1.0 + std::cos(shift + th)) / 4.0 + eb / 2.0;
  };
  t.p[0][0] = key_same;
  t.p[1][1] = key_same;
  t.p[0][1] = key_diff;
  t.p[1][0] = key_diff;
  for (int k : {2, 3}) {
    for (int n : {0, 1}) {
      t.p[k][n] = 0.25;
      t.p[n][k] = 0.25;
    }
  }
  t.p[2][2] = mixed(0.0);
  t.p[3][3] = mixed(0.0);
  t.p[2][3] = mixed(kPi / 2.0);   // 1 + cos(pi/2 + theta) = 1 - sin(theta)
  t.p[3][2] = mixed(-kPi / 2.0);  // 1 + cos(pi/2 - theta) = 1 + sin(theta)
  return t;
}

struct SampledTable {
  ProbabilityTable table;
  std::array<std::array<long, 4>, 4> counts{};
  long shots = 0;
};

// Monte Carlo estimate: per-cell Binomial(shots, ideal p_ij) with a
// deterministic substream per (seed, i, j), so cells may be drawn in any
// order (or in parallel) without changing the result.
inline SampledTable sampled_table(const ChannelParams& params, long shots,
                                  std::uint64_t seed) {
  require_valid(params);
  if (shots < 1) throw TableError("shots must be >= 1");
  const ProbabilityTable ideal = ideal_table(params);
  SampledTable out;
  out.shots = shots;
  out.table.size = 4;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::mt19937_64 gen(derive_stream(seed, static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(j)));
      out.counts[i][j] = binomial(gen, shots, ideal.p[i][j]);
      out.table.p[i][j] =
          static_cast<double>(out.counts[i][j]) / static_cast<double>(shots);
    }
  }
  return out;
}

}  // namespace rfimdi

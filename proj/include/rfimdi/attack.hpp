#pragma once

// Ground-truth oracle: explicit attack instances (states + Eve's outcome-1
// operator collapsed to a single contraction K on the joint qubit space).
// Every bound the analyzer certifies must hold for the true quantities of
// such an instance; any violation is an implementation bug.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rfimdi/coefficients.hpp"
#include "rfimdi/common.hpp"
#include "rfimdi/key_rate.hpp"
#include "rfimdi/table.hpp"

namespace rfimdi {

struct AttackConfig {
  double max_overlap = 0.5;  // cap on |<phi0|phi1>| for the encoding pair
};

struct AttackInstance {
  // Index 0,1 = encoding states, 2,3 = checking states (unit norm, dim 2).
  std::array<Eigen::Vector2cd, 4> alice_states;
  std::array<Eigen::Vector2cd, 4> bob_states;
  // Eve's outcome-1 effect: sqrt(p_ij)|Gamma_ij> = K |phi_i phi'_j>.
  Eigen::Matrix4cd kraus;
  // Construction ground truth: checking state k = a0*enc0 + a1*e^{i theta}*enc1.
  std::array<CoefficientPoint, 2> alice_coeffs;  // k = 2, 3
  std::array<CoefficientPoint, 2> bob_coeffs;
  std::array<double, 2> alice_phases;
  std::array<double, 2> bob_phases;
};

namespace detail {

// Joint vector |phi phi'>: component 2*i + j = phi_i * phi'_j.
inline Eigen::Vector4cd kron2(const Eigen::Vector2cd& a,
                              const Eigen::Vector2cd& b) {
  Eigen::Vector4cd v;
  v(0) = a(0) * b(0);
  v(1) = a(0) * b(1);
  v(2) = a(1) * b(0);
  v(3) = a(1) * b(1);
  return v;
}

inline Eigen::Vector2cd random_unit2(std::mt19937_64& gen) {
  Eigen::Vector2cd v;
  v(0) = std::complex<double>(gaussian(gen), gaussian(gen));
  v(1) = std::complex<double>(gaussian(gen), gaussian(gen));
  const double n = v.norm();
  if (n < 1e-12) {
    v << 1.0, 0.0;
    return v;
  }
  return v / n;
}

struct SideDraw {
  std::array<Eigen::Vector2cd, 4> states;
  std::array<CoefficientPoint, 2> coeffs;
  std::array<double, 2> phases;
};

// Encoding pair with bounded overlap, then checking superpositions whose
// coefficients are exact by construction (solve the unit-norm condition for
// a1 given a0 and the relative phase).
inline SideDraw random_side(std::mt19937_64& gen, double max_overlap) {
  SideDraw side;
  const Eigen::Vector2cd phi0 = random_unit2(gen);
  Eigen::Vector2cd perp;
  perp(0) = -std::conj(phi0(1));
  perp(1) = std::conj(phi0(0));
  const double zeta = uniform01(gen) * max_overlap;
  const double chi = uniform01(gen) * 2.0 * kPi;
  const std::complex<double> phase(std::cos(chi), std::sin(chi));
  const Eigen::Vector2cd phi1 =
      zeta * phase * phi0 + std::sqrt(1.0 - zeta * zeta) * perp;
  side.states[0] = phi0;
  side.states[1] = phi1;

  const std::complex<double> z = phi0.dot(phi1);  // <phi0|phi1>
  for (int k = 0; k < 2; ++k) {
    const double a0 = 0.3 + 0.65 * uniform01(gen);
    const double theta = uniform01(gen) * 2.0 * kPi;
    const std::complex<double> rot(std::cos(theta), std::sin(theta));
    const double x = (rot * z).real();
    const double a1 = -a0 * x + std::sqrt(1.0 - a0 * a0 * (1.0 - x * x));
    side.states[2 + k] = a0 * phi0 + a1 * rot * phi1;
    side.coeffs[k] = {a0, a1};
    side.phases[k] = theta;
  }
  return side;
}

inline double max_singular_value(const Eigen::Matrix4cd& m) {
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace detail

inline AttackInstance random_attack(std::uint64_t seed,
                                    const AttackConfig& config = {}) {
  AttackInstance attack;
  std::mt19937_64 gen_a(derive_stream(seed, 1, 0));
  std::mt19937_64 gen_b(derive_stream(seed, 1, 1));
  std::mt19937_64 gen_k(derive_stream(seed, 2, 0));

  const detail::SideDraw alice = detail::random_side(gen_a, config.max_overlap);
  const detail::SideDraw bob = detail::random_side(gen_b, config.max_overlap);
  attack.alice_states = alice.states;
  attack.bob_states = bob.states;
  attack.alice_coeffs = alice.coeffs;
  attack.bob_coeffs = bob.coeffs;
  attack.alice_phases = alice.phases;
  attack.bob_phases = bob.phases;

  Eigen::Matrix4cd k;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      k(i, j) = std::complex<double>(gaussian(gen_k), gaussian(gen_k));
    }
  }
  const double sigma = detail::max_singular_value(k);
  const double factor = 1.0 + uniform01(gen_k);
  if (sigma > 0.0) k /= sigma * factor;
  attack.kraus = k;
  return attack;
}

// Singlet-projection measurement with conjugate checking bases on the two
// sides; reproduces the noiseless zero-rotation reference table exactly.
inline AttackInstance ideal_attack() {
  AttackInstance attack;
  const double s = 1.0 / std::sqrt(2.0);

  attack.alice_states[0] << 1.0, 0.0;
  attack.alice_states[1] << 0.0, 1.0;
  // Bob's encoding pair is bit-flipped so that matching logical bits are the
  // anti-correlated physical pair the singlet projector accepts.
  attack.bob_states[0] << 0.0, 1.0;
  attack.bob_states[1] << 1.0, 0.0;

  attack.alice_coeffs = {{{s, s}, {s, s}}};
  attack.bob_coeffs = {{{s, s}, {s, s}}};
  attack.alice_phases = {0.0, kPi / 2.0};
  attack.bob_phases = {kPi, kPi / 2.0};
  for (int k = 0; k < 2; ++k) {
    const std::complex<double> ra(std::cos(attack.alice_phases[k]),
                                  std::sin(attack.alice_phases[k]));
    const std::complex<double> rb(std::cos(attack.bob_phases[k]),
                                  std::sin(attack.bob_phases[k]));
    attack.alice_states[2 + k] =
        s * attack.alice_states[0] + s * ra * attack.alice_states[1];
    attack.bob_states[2 + k] =
        s * attack.bob_states[0] + s * rb * attack.bob_states[1];
  }

  Eigen::Vector4cd singlet;
  singlet << 0.0, s, -s, 0.0;
  attack.kraus = singlet * singlet.adjoint();
  return attack;
}

// Ideal attack followed by a relative rotation of angle theta on Bob's qubit;
// induces the noiseless reference table at rotation theta, cell for cell.
inline AttackInstance rotated_attack(double theta) {
  AttackInstance attack = ideal_attack();
  Eigen::Matrix4cd rot = Eigen::Matrix4cd::Zero();
  const std::complex<double> phase(std::cos(theta), std::sin(theta));
  rot(0, 0) = 1.0;
  rot(1, 1) = phase;
  rot(2, 2) = 1.0;
  rot(3, 3) = phase;
  attack.kraus = attack.kraus * rot;
  return attack;
}

inline ProbabilityTable induced_table(const AttackInstance& attack) {
  ProbabilityTable t;
  t.size = 4;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Eigen::Vector4cd v =
          attack.kraus *
          detail::kron2(attack.alice_states[i], attack.bob_states[j]);
      t.p[i][j] = std::min(1.0, std::max(0.0, v.squaredNorm()));
    }
  }
  return t;
}

inline std::complex<double> true_overlap(const AttackInstance& attack) {
  const Eigen::Vector4cd v00 =
      attack.kraus *
      detail::kron2(attack.alice_states[0], attack.bob_states[0]);
  const Eigen::Vector4cd v11 =
      attack.kraus *
      detail::kron2(attack.alice_states[1], attack.bob_states[1]);
  const double p00 = v00.squaredNorm();
  const double p11 = v11.squaredNorm();
  if (p00 <= 0.0 || p11 <= 0.0) {
    throw TableError("undefined overlap: p00 or p11 is zero");
  }
  return v00.dot(v11) / std::sqrt(p00 * p11);
}

enum class SoundnessStatus { pass, degenerate, violation };

struct SoundnessResult {
  SoundnessStatus status = SoundnessStatus::pass;
  std::vector<std::string> messages;
  KeyRateReport report;
  double true_r = 0.0;
  double omega = 0.0;
};

inline SoundnessResult soundness_check(const AttackInstance& attack,
                                       const AnalysisSettings& settings = {}) {
  SoundnessResult result;
  const ProbabilityTable table = induced_table(attack);

  const double degeneracy_floor = 1e-9;
  if (table.p[0][0] < degeneracy_floor || table.p[1][1] < degeneracy_floor) {
    result.status = SoundnessStatus::degenerate;
    result.messages.push_back("degenerate: vanishing p00 or p11");
    return result;
  }

  auto fail = [&result](const std::string& msg) {
    result.status = SoundnessStatus::violation;
    result.messages.push_back(msg);
  };

  // Contraction property of the constructed effect operator.
  if (detail::max_singular_value(attack.kraus) > 1.0 + 1e-12) {
    fail("operator is not a contraction");
  }

  // Definitional consistency: the checking-state image must equal the exact
  // superposition of encoding images dictated by the construction data.
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      const Eigen::Vector4cd lhs =
          attack.kraus * detail::kron2(attack.alice_states[2 + k],
                                       attack.bob_states[2 + l]);
      Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
      const double am[2] = {attack.alice_coeffs[k].a0,
                            attack.alice_coeffs[k].a1};
      const double bn[2] = {attack.bob_coeffs[l].a0, attack.bob_coeffs[l].a1};
      for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) {
          double phase = 0.0;
          if (m == 1) phase += attack.alice_phases[k];
          if (n == 1) phase += attack.bob_phases[l];
          const std::complex<double> rot(std::cos(phase), std::sin(phase));
          rhs += am[m] * bn[n] * rot *
                 (attack.kraus *
                  detail::kron2(attack.alice_states[m], attack.bob_states[n]));
        }
      }
      if ((lhs - rhs).norm() > 1e-10) {
        fail("superposition identity residual exceeds 1e-10 for pair (" +
             std::to_string(2 + k) + "," + std::to_string(2 + l) + ")");
      }
    }
  }

  KeyRateReport report;
  try {
    report = analyze(table, settings);
  } catch (const InconsistentError& e) {
    fail(std::string("induced table rejected as inconsistent: ") + e.what());
    return result;
  } catch (const TableError& e) {
    result.status = SoundnessStatus::degenerate;
    result.messages.push_back(std::string("degenerate: ") + e.what());
    return result;
  }
  result.report = report;
  result.omega = report.omega;

  // (i) True coefficient points must be feasible for their side/row spec.
  for (int k = 0; k < 2; ++k) {
    const SideRowSpec sa = make_side_spec(table, Side::alice, 2 + k);
    if (!is_feasible(attack.alice_coeffs[k], sa, settings.eps)) {
      fail("true Alice coefficients infeasible for k=" + std::to_string(2 + k));
    }
    const SideRowSpec sb = make_side_spec(table, Side::bob, 2 + k);
    if (!is_feasible(attack.bob_coeffs[k], sb, settings.eps)) {
      fail("true Bob coefficients infeasible for l=" + std::to_string(2 + k));
    }
  }

  // (ii) True phase-pair quantities inside the certified intervals.
  const std::complex<double> overlap = true_overlap(attack);
  const double r = std::abs(overlap);
  const double delta = std::arg(overlap);
  result.true_r = r;
  const int pair_k[4] = {0, 0, 1, 1};
  const int pair_l[4] = {0, 1, 0, 1};
  for (int q = 0; q < 4; ++q) {
    const double phi =
        attack.alice_phases[pair_k[q]] + attack.bob_phases[pair_l[q]];
    const double x = r * std::cos(delta + phi);
    const PhaseInterval& iv = report.intervals[q];
    if (x < iv.lower - 1e-9 || x > iv.upper + 1e-9) {
      fail("true value " + std::to_string(x) + " outside interval [" +
           std::to_string(iv.lower) + ", " + std::to_string(iv.upper) +
           "] for pair index " + std::to_string(q));
    }
  }

  // (iii) Certified lower bound never exceeds the true modulus.
  if (r < report.omega - 1e-6) {
    fail("true modulus " + std::to_string(r) +
         " below certified bound " + std::to_string(report.omega));
  }

  // (iv) Composite phase identity of the four pair angles.
  {
    const double u = delta + attack.alice_phases[0] + attack.bob_phases[0];
    const double v = delta + attack.alice_phases[0] + attack.bob_phases[1];
    const double w = delta + attack.alice_phases[1] + attack.bob_phases[0];
    const double t = delta + attack.alice_phases[1] + attack.bob_phases[1];
    if (std::abs(wrap_angle(v + w - u - t)) > 1e-12) {
      fail("composite phase identity violated");
    }
  }

  if (result.status == SoundnessStatus::pass && result.messages.empty()) {
    result.messages.push_back("pass");
  }
  return result;
}

struct FuzzSummary {
  int passed = 0;
  int degenerate = 0;
  int violations = 0;
  std::vector<std::string> violation_messages;
};

inline FuzzSummary run_fuzz(std::uint64_t seed_base, int instances,
                            const AnalysisSettings& settings = {},
                            const AttackConfig& config = {}) {
  FuzzSummary summary;
  for (int i = 0; i < instances; ++i) {
    const AttackInstance attack = random_attack(seed_base + i, config);
    const SoundnessResult res = soundness_check(attack, settings);
    switch (res.status) {
      case SoundnessStatus::pass:
        ++summary.passed;
        break;
      case SoundnessStatus::degenerate:
        ++summary.degenerate;
        break;
      case SoundnessStatus::violation:
        ++summary.violations;
        for (const auto& m : res.messages) {
          summary.violation_messages.push_back(
              "seed " + std::to_string(seed_base + i) + ": " + m);
        }
        break;
    }
  }
  return summary;
}

}  // namespace rfimdi

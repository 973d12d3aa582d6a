#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "rfimdi/attack.hpp"
#include "rfimdi/channel.hpp"

using namespace rfimdi;
using Catch::Matchers::WithinAbs;

TEST_CASE("singlet construction reproduces the clean reference table") {
  const AttackInstance attack = ideal_attack();
  const ProbabilityTable induced = induced_table(attack);
  const ProbabilityTable reference = ideal_table({0.0, 0.0});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CAPTURE(i, j);
      CHECK_THAT(induced.p[i][j], WithinAbs(reference.p[i][j], 1e-12));
    }
  }
  CHECK_THAT(std::abs(true_overlap(attack)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("rotated construction matches the reference table for every angle") {
  for (double theta : {0.0, 0.3, kPi / 4.0, kPi / 2.0, 2.1, kPi, 5.0}) {
    const AttackInstance attack = rotated_attack(theta);
    const ProbabilityTable induced = induced_table(attack);
    const ProbabilityTable reference = ideal_table({0.0, theta});
    CAPTURE(theta);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CAPTURE(i, j);
        CHECK_THAT(induced.p[i][j], WithinAbs(reference.p[i][j], 1e-12));
      }
    }
  }
}

TEST_CASE("identity operator saturates every cell") {
  AttackInstance attack = ideal_attack();
  attack.kraus = Eigen::Matrix4cd::Identity();
  const ProbabilityTable t = induced_table(attack);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CAPTURE(i, j);
      CHECK_THAT(t.p[i][j], WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("zero operator is flagged degenerate") {
  AttackInstance attack = ideal_attack();
  attack.kraus = Eigen::Matrix4cd::Zero();
  const ProbabilityTable t = induced_table(attack);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(t.p[i][j] == 0.0);
  CHECK_THROWS_AS(true_overlap(attack), TableError);
  CHECK(soundness_check(attack).status == SoundnessStatus::degenerate);
}

TEST_CASE("orthogonal images give zero overlap") {
  AttackInstance attack = ideal_attack();
  Eigen::Matrix4cd k = Eigen::Matrix4cd::Zero();
  // Encoding products |phi0 phi'0> = |01> (index 1), |phi1 phi'1> = |10>
  // (index 2); map them to orthogonal directions.
  k(0, 1) = 0.8;
  k(3, 2) = 0.8;
  attack.kraus = k;
  CHECK_THAT(std::abs(true_overlap(attack)), WithinAbs(0.0, 1e-14));
}

TEST_CASE("random instances are deterministic per seed") {
  const AttackInstance a = random_attack(5);
  const AttackInstance b = random_attack(5);
  const AttackInstance c = random_attack(6);
  CHECK((a.kraus - b.kraus).norm() == 0.0);
  CHECK((a.kraus - c.kraus).norm() > 0.0);
  for (int i = 0; i < 4; ++i) {
    CHECK((a.alice_states[i] - b.alice_states[i]).norm() == 0.0);
    CHECK((a.bob_states[i] - b.bob_states[i]).norm() == 0.0);
  }
}

TEST_CASE("random instances satisfy construction invariants") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AttackInstance attack = random_attack(seed);
    CAPTURE(seed);
    for (int i = 0; i < 4; ++i) {
      CHECK_THAT(attack.alice_states[i].norm(), WithinAbs(1.0, 1e-12));
      CHECK_THAT(attack.bob_states[i].norm(), WithinAbs(1.0, 1e-12));
    }
    // Encoding overlap bounded by the configured cap.
    CHECK(std::abs(attack.alice_states[0].dot(attack.alice_states[1])) <=
          0.5 + 1e-12);
    CHECK(std::abs(attack.bob_states[0].dot(attack.bob_states[1])) <=
          0.5 + 1e-12);
    // Contraction property.
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(attack.kraus);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
    // Induced tables are valid observations.
    CHECK(validate_table(induced_table(attack), Mode::rfi).empty());
  }
}

TEST_CASE("golden random instance stays frozen") {
  // Frozen quantities of the seed-7 instance; a change indicates a
  // reproducibility break in the generator or the linear algebra.
  const AttackInstance attack = random_attack(7);
  const ProbabilityTable t = induced_table(attack);
  CHECK_THAT(t.p[0][0], WithinAbs(0.096644824327445492, 1e-15));
  CHECK_THAT(t.p[1][1], WithinAbs(0.077124488560743165, 1e-15));
  CHECK_THAT(t.p[2][3], WithinAbs(0.15395783370103502, 1e-15));
  CHECK_THAT(t.p[3][0], WithinAbs(0.10189199032336645, 1e-15));
  const std::complex<double> overlap = true_overlap(attack);
  CHECK_THAT(overlap.real(), WithinAbs(0.039216306466053952, 1e-15));
  CHECK_THAT(overlap.imag(), WithinAbs(-0.076189956765853745, 1e-15));
  const SoundnessResult res = soundness_check(attack);
  CHECK(res.status == SoundnessStatus::pass);
  CHECK_THAT(res.true_r, WithinAbs(0.085690304030398484, 1e-15));
  CHECK(res.omega == 0.0);
}

TEST_CASE("constructed instances pass the soundness gate") {
  const SoundnessResult ideal = soundness_check(ideal_attack());
  CHECK(ideal.status == SoundnessStatus::pass);
  CHECK(ideal.omega >= 0.997);

  const SoundnessResult rotated = soundness_check(rotated_attack(1.1));
  CHECK(rotated.status == SoundnessStatus::pass);
  CHECK(rotated.omega >= 0.997);
}

TEST_CASE("short fuzz run is clean") {
  const FuzzSummary summary = run_fuzz(0, 30);
  CHECK(summary.violations == 0);
  CHECK(summary.passed + summary.degenerate == 30);
  CHECK(summary.violation_messages.empty());
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "rfimdi/channel.hpp"
#include "rfimdi/io.hpp"
#include "rfimdi/table.hpp"

using namespace rfimdi;

namespace {

ProbabilityTable uniform_table(double value = 0.25) {
  ProbabilityTable t;
  t.size = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t.p[i][j] = value;
  return t;
}

bool mentions(const std::vector<std::string>& errors, const char* needle) {
  for (const auto& e : errors) {
    if (e.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("uniform table passes validation") {
  const ProbabilityTable t = uniform_table();
  CHECK(validate_table(t).empty());
  CHECK_NOTHROW(require_valid(t, Mode::rfi));
}

TEST_CASE("out-of-range entry is reported") {
  ProbabilityTable t = uniform_table();
  t.p[0][0] = -0.1;
  const auto errors = validate_table(t);
  REQUIRE_FALSE(errors.empty());
  CHECK(mentions(errors, "range"));
  CHECK_THROWS_AS(require_valid(t, Mode::rfi), TableError);
}

TEST_CASE("wrong table size is reported") {
  ProbabilityTable t = uniform_table();
  t.size = 2;
  const auto errors = validate_table(t);
  REQUIRE_FALSE(errors.empty());
  CHECK(mentions(errors, "size"));
}

TEST_CASE("3x3 table needs the reduced mode") {
  ProbabilityTable t = uniform_table();
  t.size = 3;
  CHECK(validate_table(t).empty());
  CHECK_NOTHROW(require_valid(t, Mode::nonrfi));
  CHECK_THROWS_AS(require_valid(t, Mode::rfi), TableError);
}

TEST_CASE("non-finite entries are reported") {
  ProbabilityTable t = uniform_table();
  t.p[2][3] = std::numeric_limits<double>::quiet_NaN();
  CHECK(mentions(validate_table(t), "finite"));
  t.p[2][3] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(validate_table(t).empty());
}

TEST_CASE("channel tables always validate") {
  for (double eb : {0.0, 0.01, 0.1, 0.25, 0.5}) {
    for (int i = 0; i < 8; ++i) {
      const double theta = i * 2.0 * kPi / 8.0;
      const ProbabilityTable t = ideal_table({eb, theta});
      CAPTURE(eb, theta);
      CHECK(validate_table(t, Mode::rfi).empty());
    }
  }
}

TEST_CASE("serialization round trip is bit exact") {
  const ProbabilityTable t = ideal_table({0.0123, 0.7});
  std::stringstream buffer;
  write_table(buffer, t);
  const ProbabilityTable back = read_table(buffer);
  REQUIRE(back.size == t.size);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // Bit-level identity, not approximate equality.
      std::uint64_t raw_a = 0;
      std::uint64_t raw_b = 0;
      std::memcpy(&raw_a, &t.p[i][j], sizeof raw_a);
      std::memcpy(&raw_b, &back.p[i][j], sizeof raw_b);
      CAPTURE(i, j);
      CHECK(raw_a == raw_b);
    }
  }
}

TEST_CASE("counts variant divides by shots") {
  std::stringstream buffer;
  buffer << R"({"size": 3, "shots": 8,
                "counts": [[1,2,3],[4,5,6],[7,8,0]]})";
  const ProbabilityTable t = read_table(buffer);
  CHECK(t.size == 3);
  CHECK(t.p[0][0] == 0.125);
  CHECK(t.p[1][1] == 0.625);
  CHECK(t.p[2][1] == 1.0);
  CHECK(t.p[2][2] == 0.0);
}

TEST_CASE("malformed table files are rejected") {
  auto parse = [](const char* text) {
    std::stringstream buffer;
    buffer << text;
    return read_table(buffer);
  };
  CHECK_THROWS_AS(parse("not json at all"), TableError);
  CHECK_THROWS_AS(parse(R"({"p": [[1]]})"), TableError);  // missing size
  CHECK_THROWS_AS(parse(R"({"size": 5, "p": []})"), TableError);
  CHECK_THROWS_AS(parse(R"({"size": 4})"), TableError);  // neither variant
  CHECK_THROWS_AS(
      parse(R"({"size": 3, "p": [[0,0,0],[0,0,0],[0,0,0]],
                "shots": 2, "counts": [[0,0,0],[0,0,0],[0,0,0]]})"),
      TableError);  // both variants
  CHECK_THROWS_AS(parse(R"({"size": 3, "p": [[0,0],[0,0],[0,0]]})"),
                  TableError);  // ragged rows
  CHECK_THROWS_AS(
      parse(R"({"size": 3, "shots": 4, "counts": [[5,0,0],[0,0,0],[0,0,0]]})"),
      TableError);  // count above shots
  CHECK_THROWS_AS(
      parse(R"({"size": 3, "shots": 0, "counts": [[0,0,0],[0,0,0],[0,0,0]]})"),
      TableError);  // zero shots
}

TEST_CASE("sampled table serializes counts") {
  const SampledTable s = sampled_table({0.1, 0.3}, 50, 11);
  std::stringstream buffer;
  write_sampled(buffer, s);
  const ProbabilityTable back = read_table(buffer);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(back.p[i][j] == static_cast<double>(s.counts[i][j]) / 50.0);
    }
  }
}

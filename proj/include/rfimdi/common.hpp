#pragma once

// Shared constants, error types, and deterministic RNG helpers.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace rfimdi {

// Conservative slack applied when comparing against interval endpoints.
inline constexpr double kEps = 1e-9;
// Below this denominator the pair bounds are declared vacuous (+-1).
inline constexpr double kEpsDenom = 1e-12;
// Search cap on checking-state amplitudes; normalization alone only forces
// |a0 - a1| <= 1, so the feasible region needs an explicit box to be bounded.
inline constexpr double kAmpCap = 3.0;

inline constexpr double kPi = 3.14159265358979323846;

// Input could not be parsed or violates basic validity (CLI exit code 1).
struct TableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Observations contradict the two-dimensional-source assumption or yield a
// mutually contradictory phase system (CLI exit code 2).
struct InconsistentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64: tiny, well-known 64-bit mixer; used to derive independent
// substream seeds so parallel sampling stays deterministic.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed for the (a, b) substream of a master seed.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t z = splitmix64(s);
  s = z ^ (a * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
  z = splitmix64(s);
  s = z ^ (b * 0xda942042e4dd58b5ull + 0x9e3779b97f4a7c15ull);
  return splitmix64(s);
}

// Uniform in [0, 1) with 53 random bits. std::uniform_real_distribution is
// implementation-defined, which would break byte-stable golden files.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1] (never zero; safe under log).
inline double uniform01_open(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

// One standard normal draw via Box-Muller (two uniforms per call; the sine
// branch is discarded to keep the draw count per call fixed).
inline double gaussian(std::mt19937_64& gen) {
  const double u1 = uniform01_open(gen);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Binomial(n, p) by direct Bernoulli counting: exact, deterministic, and fast
// enough for the shot counts used here (<= a few million).
inline long binomial(std::mt19937_64& gen, long n, double p) {
  long successes = 0;
  for (long t = 0; t < n; ++t) {
    if (uniform01(gen) < p) ++successes;
  }
  return successes;
}

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double x) {
  x = std::fmod(x, 2.0 * kPi);
  if (x <= -kPi) x += 2.0 * kPi;
  if (x > kPi) x -= 2.0 * kPi;
  return x;
}

}  // namespace rfimdi

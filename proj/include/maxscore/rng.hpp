#pragma once

// Reproducible random number generation.
//
// Every stochastic routine in the library takes a SeedSpec and derives its
// draws from a fully specified pipeline so that identical seeds reproduce
// identical bytes on every build:
//
//   key  = mix64(mix64(mix64(master_seed) ^ stream_id) ^ salt)
//   gen  = std::mt19937_64(key)                  (engine fixed by the standard)
//   u64  = gen()
//   u01  = (u64 >> 11) * 2^-53                   in [0, 1)
//   normal pairs via the trigonometric Box-Muller transform
//
// mix64 is the splitmix64 finalizer. This mapping is frozen: changing it
// invalidates every recorded experiment seed.

#include <cmath>
#include <cstdint>
#include <random>

namespace maxscore {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_key(const SeedSpec& s, std::uint64_t salt = 0) {
  return mix64(mix64(mix64(s.master_seed) ^ s.stream_id) ^ salt);
}

class Rng {
 public:
  explicit Rng(const SeedSpec& s, std::uint64_t salt = 0) : gen_(seed_key(s, salt)) {}
  Rng(std::uint64_t master, std::uint64_t stream, std::uint64_t salt = 0)
      : gen_(seed_key({master, stream}, salt)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer on [0, n), n >= 1. Rejection-free enough for our n
  // (bias < 2^-53 relative); deterministic.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller; one spare cached per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace maxscore

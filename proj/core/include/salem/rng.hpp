#pragma once

#include <cstdint>
#include <random>

namespace salem {

/// Seeded 64-bit generator with platform-independent derived draws.
/// std::uniform_int_distribution is implementation-defined, so bounded
/// draws are done here by rejection.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Derives an independent stream for a (tag, index) pair.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    std::uint64_t z = seed ^ (tag * 0x9E3779B97F4A7C15ULL) ^ (index + 0x632BE59BD9B4E019ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace salem

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace chaospriv {

// Deterministic random source. All randomness in the library funnels through
// this wrapper so runs are reproducible across platforms: mt19937_64 output
// is specified bit-for-bit by the standard, and the uniform mapping below is
// fixed here instead of relying on distribution objects, whose streams the
// standard leaves implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stable per-purpose seed derivation (splitmix64 over seed and a label hash)
// so independent streams never share state even when built from one run seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose);

}  // namespace chaospriv

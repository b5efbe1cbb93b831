#pragma once

// Counter-based splittable generator. All randomness in the project flows
// through this so that runs are reproducible bit-for-bit across platforms
// (std::uniform_int_distribution is implementation-defined and unusable for
// that). Instances consume randomness as explicit per-step draws, which also
// lets tiny-scale enumeration sweep "all seeds" as index tuples.

#include <cstdint>

namespace gridlab {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ 0xd1b54a32d192ed03ull)) {}

  // Independent substream; safe to hand to parallel workers.
  Rng split(std::uint64_t stream) const {
    Rng r(0);
    r.key_ = mix64(key_ ^ mix64(stream * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
    r.ctr_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix64(key_ + 0xa0761d6478bd642full * ++ctr_); }

  // Unbiased draw from [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t x = next_u64();
    while (x > limit) x = next_u64();
    return x % bound;
  }

  bool coin() { return (next_u64() & 1) != 0; }

  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

}  // namespace gridlab

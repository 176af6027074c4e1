#pragma once

#include <cstdint>

namespace rnc {

// splitmix64: tiny, seedable, statistically fine for test-vector generation.
// Streams are derived counter-style from (seed, index) so that sharded
// consumers (e.g. a --threads checker) see the same values in any schedule.
class rng {
  public:
    explicit rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform in {0, ..., n-1}.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    bool chance(double p) { return unit() < p; }

  private:
    std::uint64_t state_;
};

// Stream derivation: mixes the parts through one splitmix round each.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    rng r(seed ^ (0x51f3a9e4d2c80b17ull + stream * 0x9e3779b97f4a7c15ull));
    return r.next();
}

// Counter-based stream: the i-th sample's generator is independent of how
// many draws earlier samples consumed.
inline rng rng_at(std::uint64_t seed, std::uint64_t index) {
    return rng(derive_seed(seed, index));
}

}  // namespace rnc

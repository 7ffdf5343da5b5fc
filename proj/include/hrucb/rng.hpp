#pragma once
// Deterministic random streams with a fixed draw schedule: every uniform and
// every normal consumes exactly one 64-bit engine step, so the number of
// draws per simulated user is a constant independent of realized values.

#include <cstdint>
#include <random>

#include "hrucb/lifetime.hpp"

namespace hrucb {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stable 64-bit mix of a base seed and an index (trial number, substream tag).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 0x6A09E667F3BCC909ULL));
}

// Substream tags used by the experiment harness.
inline constexpr std::uint64_t kUserStreamTag = 1;
inline constexpr std::uint64_t kOutcomeStreamTag = 2;

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on (0,1), strictly interior: ((k + 0.5) / 2^53 for a 53-bit k.
    double uniform01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal by inversion; exactly one engine step.
    double normal() { return std_normal_quantile(uniform01()); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace hrucb

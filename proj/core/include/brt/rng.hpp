#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace brt {

/// Deterministic splittable random stream.
///
/// Substream b of a given seed is fully determined by (seed, b), so bootstrap
/// draws are reproducible independently of execution order. The core generator
/// is splitmix64, which is fully specified (no implementation-defined library
/// distributions), so output is identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Substream for draw index b; statistically independent of other indices.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed);
        std::uint64_t a = mix.next_u64();
        Rng mix2(a ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return Rng(mix2.next_u64());
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1); never returns 0 or 1.
    double next_uniform() {
        // 53-bit mantissa, shifted into (0,1) by a half-ulp offset
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pairwise, second value cached).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// +1 or -1 with equal probability.
    double next_rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Uniform integer in [0, bound); bound must be >= 1.
    std::uint64_t next_index(std::uint64_t bound) {
        // Lemire multiply-shift; bias is unreachable at realistic bounds
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace brt

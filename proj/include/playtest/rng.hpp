#pragma once
// Deterministic random number utilities. Every stochastic piece of the
// toolkit (grid refills, rollouts, CEM search, population draws) pulls from
// streams built here, so the algorithms are pinned: splitmix64 for seeding
// and stream derivation, xoshiro256** as the generator. std::* distributions
// are avoided on purpose; their output is implementation-defined and would
// break byte-identical reproducibility across toolchains.

#include <array>
#include <cmath>
#include <cstdint>

namespace playtest {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stable sub-stream derivation: fold parts into the parent seed one at a
// time. derive_seed(master, level_id, run_index) is the contract used for
// per-run seeds, so changing this changes every output artifact.
constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept { return seed; }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t part, Rest... rest) noexcept {
    return derive_seed(splitmix64(seed ^ (part + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2))),
                       static_cast<std::uint64_t>(rest)...);
}

class Rng {
  public:
    Rng() : Rng(0) {}

    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x = splitmix64(x);
            word = x;
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    bool operator==(const Rng&) const = default;

    // xoshiro256**
    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1], safe as a log() argument.
    double uniform01_open() noexcept { return 1.0 - uniform01(); }

    // Unbiased uniform integer in [0, n). n must be nonzero.
    std::uint32_t below(std::uint32_t n) noexcept {
        std::uint64_t x = next() >> 32;
        std::uint64_t m = x * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = (0u - n) % n;
            while (low < threshold) {
                x = next() >> 32;
                m = x * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    std::size_t index(std::size_t n) noexcept { return below(static_cast<std::uint32_t>(n)); }

    // Standard normal via Box-Muller (two fresh draws per value; no cached
    // state, so the draw sequence stays position-independent).
    double normal() noexcept {
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Marsaglia-Tsang gamma sampler, shape alpha > 0, unit scale.
    double gamma(double alpha) noexcept {
        if (alpha < 1.0) {
            const double u = uniform01_open();
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01_open();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Beta(a, b) via two gamma draws. Falls back to the mean if both draws
    // underflow to zero (only reachable for extreme shape values).
    double beta(double a, double b) noexcept {
        const double x = gamma(a);
        const double y = gamma(b);
        const double sum = x + y;
        if (sum <= 0.0) return a / (a + b);
        return x / sum;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace playtest

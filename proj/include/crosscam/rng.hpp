#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace crosscam {

/**
 * Counter-based deterministic RNG. Each (seed, label, counter) triple opens
 * an independent splitmix64 stream, so per-camera / per-frame synthesis is
 * independent of iteration order and byte-stable across runs and platforms.
 */
class Rng {
  public:
    Rng(std::uint64_t seed, std::string_view label, std::uint64_t counter)
        : state_(mix(mix(seed ^ fnv1a(label)) ^ mix(counter + 0x9E3779B97F4A7C15ull))) {}

    explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller; one value per call, the spare is discarded to keep the
    // stream position a pure function of the call count.
    double normal(double mu, double sigma) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return mu + sigma * z;
    }

    // Knuth's product method; fine for the small rates used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace crosscam

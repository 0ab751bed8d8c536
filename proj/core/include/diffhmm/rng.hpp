#pragma once

#include <cmath>
#include <cstdint>

namespace diffhmm {

/// Deterministic pseudo-random stream (xoshiro256++ seeded through splitmix64).
///
/// Streams are addressed by (seed, stream index) so Monte Carlo work can be
/// split across workers without any shared state: path k always draws from
/// Rng(seed, k) no matter which thread runs it. All distributions are
/// generated by explicit algorithms (no std::*_distribution) so output is
/// bit-identical across standard libraries and platforms.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        // splitmix64 expansion of (seed, stream) into the 256-bit state
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Marsaglia polar (one deviate cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, w, s;
        do {
            u = 2.0 * uniform() - 1.0;
            w = 2.0 * uniform() - 1.0;
            s = u * u + w * w;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = w * m;
        have_spare_ = true;
        return u * m;
    }

    /// Exponential with the given rate.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// Index in [0, n) drawn from the given discrete weights (need not be
    /// normalized; negative entries are treated as zero).
    template <typename Vec>
    int discrete(const Vec& weights, int n) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += weights[i] > 0.0 ? weights[i] : 0.0;
        double u = uniform() * total;
        for (int i = 0; i < n; ++i) {
            const double w = weights[i] > 0.0 ? weights[i] : 0.0;
            u -= w;
            if (u < 0.0) return i;
        }
        return n - 1;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace diffhmm

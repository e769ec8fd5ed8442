#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace csmds {

/// Deterministic stream generator (SplitMix64). One 64-bit word of explicit
/// state, so runs are reproducible from a seed alone and independent streams
/// can be derived by mixing (see derive_stream). All randomness in the
/// toolkit flows through this type.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Bernoulli trial. Consumes exactly one draw regardless of p.
    bool bernoulli(double p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("bernoulli: probability outside [0,1]");
        return uniform() < p;
    }

    /// Standard normal via Box-Muller (cosine branch). Consumes two draws.
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, bound) without modulo bias (Lemire reduction).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a stream tag
/// (e.g. grid-cell coordinates). Same mixing as the generator itself.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t tag) {
    Rng r(base ^ (0x9E3779B97F4A7C15ull * (tag + 1)));
    return r.next_u64();
}

}  // namespace csmds

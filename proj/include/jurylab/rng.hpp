// Counter-based deterministic RNG. Every logical stream is derived purely from
// (seed, stream id), so replicated work is reproducible regardless of thread
// count or evaluation order.
#pragma once

#include <cstdint>
#include <stdexcept>

#include "jurylab/math.hpp"

namespace jurylab {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    // SplitMix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

/// Exact Binomial(n, p) sampling by inversion. The pmf is enumerated outward
/// from the mode, so the expected work is O(sqrt(n p (1-p))) per draw.
inline long long sample_binomial(CounterRng& rng, long long n, double p) {
    if (n < 0) throw std::domain_error("sample_binomial: negative n");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const double u = rng.next_unit();
    const long long k0 = static_cast<long long>(static_cast<double>(n + 1) * p);
    const double pk0 = std::exp(math::binom_log_pmf(n, k0, p));
    double cum = pk0;
    if (u < cum) return k0;
    double up = pk0, dn = pk0;
    long long ku = k0, kd = k0;
    while (ku < n || kd > 0) {
        if (ku < n) {
            up *= static_cast<double>(n - ku) / static_cast<double>(ku + 1) * p / (1.0 - p);
            ++ku;
            cum += up;
            if (u < cum) return ku;
        }
        if (kd > 0) {
            dn *= static_cast<double>(kd) / static_cast<double>(n - kd + 1) * (1.0 - p) / p;
            --kd;
            cum += dn;
            if (u < cum) return kd;
        }
        if (up < math::kProbFloor && dn < math::kProbFloor) break;
    }
    // u landed in the rounding slack beyond the enumerated mass
    return k0;
}

}  // namespace jurylab

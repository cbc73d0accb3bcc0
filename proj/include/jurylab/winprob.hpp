// Winning probability of the popular candidate A at a given threshold, by
// exact trinomial enumeration, Normal approximation, or Monte Carlo, plus the
// large-population limit classification for Polynomial models.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jurylab/equilibrium.hpp"
#include "jurylab/math.hpp"
#include "jurylab/rng.hpp"
#include "jurylab/support.hpp"
#include "jurylab/util.hpp"

namespace jurylab {

enum class WinProbMethod { ExactTrinomial, NormalApprox, MonteCarlo };

struct WinProbEstimate {
    double value = 0.0;      // Pr(V_A > V_B)
    WinProbMethod method = WinProbMethod::ExactTrinomial;
    double stderr_ = 0.0;    // > 0 only for Monte Carlo
    double tie_prob = 0.0;   // Pr(V_A = V_B); 0 by construction for NormalApprox
    bool low_turnout_warning = false;  // NormalApprox with n(c) < 30
};

/// Thrown when a request exceeds a method's size limit.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long long kExactPopulationCap = 5000;

/// Exact Pr(V_A > V_B) under the trinomial model: each of N voters is an
/// active A with probability s_A(c), active B with s_B(c), abstains otherwise.
/// Computed by convolving the distribution of the signed difference V_A - V_B.
inline WinProbEstimate winprob_exact(const Election& e, double c) {
    const long long N = e.population;
    if (N > kExactPopulationCap)
        throw CapacityError("winprob_exact: N > " + std::to_string(kExactPopulationCap) +
                            "; use winprob_normal or winprob_montecarlo");
    const double pa = e.issue.s_a(c);
    const double pb = e.issue.s_b(c);
    const double p0 = 1.0 - pa - pb;

    const std::size_t width = static_cast<std::size_t>(2 * N + 1);
    std::vector<double> dist(width, 0.0), next(width, 0.0);
    const std::size_t off = static_cast<std::size_t>(N);  // index of difference 0
    dist[off] = 1.0;
    for (long long v = 1; v <= N; ++v) {
        const std::size_t lo = off - static_cast<std::size_t>(v);
        const std::size_t hi = off + static_cast<std::size_t>(v);
        for (std::size_t d = lo; d <= hi; ++d) {
            double acc = p0 * dist[d];
            if (d > 0) acc += pa * dist[d - 1];
            if (d + 1 < width) acc += pb * dist[d + 1];
            next[d] = acc;
        }
        std::swap(dist, next);
    }
    WinProbEstimate out;
    out.method = WinProbMethod::ExactTrinomial;
    double win = 0.0;
    for (std::size_t d = off + 1; d < width; ++d) win += dist[d];
    out.value = std::min(1.0, win);
    out.tie_prob = dist[off];
    return out;
}

/// Normal approximation Phi(mu/sigma) with mu = 0.5 * m * n and
/// sigma^2 = 0.25 * (1 - m^2) * n, where m is signed toward candidate A.
/// Flags (but still computes) results with fewer than 30 expected voters.
inline WinProbEstimate winprob_normal(const Election& e, double c) {
    const double sa = e.issue.s_a(c);
    const double sb = e.issue.s_b(c);
    const double tot = sa + sb;
    if (!(tot > 0.0)) throw std::domain_error("winprob_normal: zero total support at c");
    const double n = tot * static_cast<double>(e.population);
    const double m = (sa - sb) / tot;  // signed: negative when B leads
    WinProbEstimate out;
    out.method = WinProbMethod::NormalApprox;
    out.low_turnout_warning = n < 30.0;
    const double sigma = std::sqrt(0.25 * (1.0 - m * m) * n);
    if (sigma == 0.0) {
        out.value = m > 0.0 ? 1.0 : 0.0;
        return out;
    }
    out.value = math::normal_cdf(0.5 * m * n / sigma);
    return out;
}

/// Monte Carlo estimate over `reps` simulated elections. Each replicate draws
/// the trinomial outcome from its own counter-based stream keyed by
/// (seed, replicate), so the aggregate is independent of worker count.
inline WinProbEstimate winprob_montecarlo(const Election& e, double c, long long reps,
                                          std::uint64_t seed) {
    if (reps < 100) throw std::invalid_argument("winprob_montecarlo: reps must be >= 100");
    const double pa = e.issue.s_a(c);
    const double pb = e.issue.s_b(c);
    const long long N = e.population;

    struct Counts {
        long long wins = 0, ties = 0;
    };
    const auto chunk_counts = [&](long long lo, long long hi) {
        Counts k;
        for (long long r = lo; r < hi; ++r) {
            CounterRng rng(seed, static_cast<std::uint64_t>(r));
            const long long va = sample_binomial(rng, N, pa);
            const long long vb =
                pa >= 1.0 ? 0 : sample_binomial(rng, N - va, std::min(1.0, pb / (1.0 - pa)));
            if (va > vb) ++k.wins;
            else if (va == vb) ++k.ties;
        }
        return k;
    };

    std::vector<Counts> partial = util::parallel_map<Counts>(reps, chunk_counts);
    long long wins = 0, ties = 0;
    for (const auto& k : partial) {
        wins += k.wins;
        ties += k.ties;
    }
    WinProbEstimate out;
    out.method = WinProbMethod::MonteCarlo;
    out.value = static_cast<double>(wins) / static_cast<double>(reps);
    out.tie_prob = static_cast<double>(ties) / static_cast<double>(reps);
    out.stderr_ = std::sqrt(out.value * (1.0 - out.value) / static_cast<double>(reps));
    return out;
}

struct LimitClassification {
    enum class Regime { Jury, StrongNonJury, NonJuryThreshold };
    Regime regime = Regime::Jury;
    double limit_value = 1.0;
};

/// Limiting win probability of the popular candidate along a non-trivial
/// equilibrium family of a Polynomial model with pivot point c_star:
/// 1 when alpha > 2*beta, 1/2 when alpha < 2*beta, and
/// Phi(c_star^(-1/alpha)) on the threshold alpha = 2*beta.
inline LimitClassification classify_limit(double alpha, double beta, double c_star) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::domain_error("classify_limit: alpha and beta must be positive");
    if (!(c_star > 0.0 && c_star < 1.0))
        throw std::domain_error("classify_limit: c_star must lie in (0, 1)");
    LimitClassification out;
    if (std::abs(alpha - 2.0 * beta) <= 1e-12) {
        out.regime = LimitClassification::Regime::NonJuryThreshold;
        out.limit_value = math::normal_cdf(std::pow(c_star, -1.0 / alpha));
    } else if (alpha > 2.0 * beta) {
        out.regime = LimitClassification::Regime::Jury;
        out.limit_value = 1.0;
    } else {
        out.regime = LimitClassification::Regime::StrongNonJury;
        out.limit_value = 0.5;
    }
    return out;
}

inline std::string method_name(WinProbMethod m) {
    switch (m) {
        case WinProbMethod::ExactTrinomial: return "exact";
        case WinProbMethod::NormalApprox: return "normal";
        case WinProbMethod::MonteCarlo: return "mc";
    }
    return "?";
}

inline std::string regime_name(LimitClassification::Regime r) {
    switch (r) {
        case LimitClassification::Regime::Jury: return "jury";
        case LimitClassification::Regime::StrongNonJury: return "strong-non-jury";
        case LimitClassification::Regime::NonJuryThreshold: return "non-jury-threshold";
    }
    return "?";
}

}  // namespace jurylab

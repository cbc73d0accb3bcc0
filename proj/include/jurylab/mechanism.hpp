// Sortition mechanism: sample a group small enough that everyone sampled
// perceives themselves pivotal (and therefore votes), decide by majority or by
// a two-round supermajority protocol.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jurylab/math.hpp"
#include "jurylab/rng.hpp"
#include "jurylab/support.hpp"
#include "jurylab/util.hpp"

namespace jurylab {

struct MechanismConfig {
    double epsilon = 0.1;   // expected margin under full participation, s_A(1) - s_B(1)
    double gamma = 0.3;     // supermajority threshold as a fraction of epsilon
    bool force_odd = true;

    static MechanismConfig make(double epsilon, double gamma, bool force_odd = true) {
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw std::invalid_argument("mechanism: epsilon must lie in (0, 1]");
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("mechanism: gamma must lie in (0, 1)");
        return MechanismConfig{epsilon, gamma, force_odd};
    }
};

namespace detail {

// floor(x) robust against 1/eps^2 landing a hair under an integer
inline long long floor_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-9 * std::max(1.0, std::abs(x)))
        return static_cast<long long>(r);
    return static_cast<long long>(std::floor(x));
}

}  // namespace detail

/// Largest sample size guaranteeing full participation for margin epsilon:
/// floor(1/eps^2), optionally decremented to the nearest odd value. Under the
/// Polynomial model with q = 1, alpha = 1, beta = 1/2 this makes
/// p(n, eps) = 1, so every sampled voter votes.
inline long long sample_size(double epsilon, bool force_odd = true) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::domain_error("sample_size: epsilon must lie in (0, 1]");
    long long n = detail::floor_snapped(1.0 / (epsilon * epsilon));
    if (force_odd && n % 2 == 0) --n;
    if (n < 1) throw std::domain_error("sample_size: no valid sample size for this epsilon");
    return n;
}

/// Exact Pr(X > n/2) for X ~ Bin(n, (1+eps)/2): the popular candidate's win
/// probability under single-round majority with n sampled voters.
inline double single_round_winprob(double epsilon, long long n) {
    if (n < 1) throw std::domain_error("single_round_winprob: n must be >= 1");
    return math::binom_tail_geq(n, n / 2 + 1, (1.0 + epsilon) / 2.0);
}

struct TwoRoundAnalytics {
    long long n = 0;          // round-1 sample size
    long long n_round2 = 0;   // round-2 sample size (> n)
    double p_A_round1 = 0.0;  // A reaches the supermajority margin in round 1
    double p_B_round1 = 0.0;
    double p_undecided = 0.0;       // neither margin reached; round 2 happens
    double p_A_total = 0.0;
    double p_B_total = 0.0;
    double p_undecided_final = 0.0;  // round-2 tie mass (even n_round2 only)
};

/// Exact two-round protocol probabilities. Round 1 samples n = sample_size(eps)
/// voters and declares a winner on a vote-difference margin of at least
/// eps' * n with eps' = gamma * eps (weak inequality). Otherwise round 2
/// samples n' = sample_size(eps') voters and uses strict simple majority;
/// a round-2 tie stays undecided.
inline TwoRoundAnalytics two_round_analytics(const MechanismConfig& cfg) {
    const double eps = cfg.epsilon;
    const double eps2 = cfg.gamma * eps;
    const long long n = sample_size(eps, cfg.force_odd);
    const long long n2 = sample_size(eps2, cfg.force_odd);
    if (n2 <= n)
        throw std::invalid_argument(
            "two_round_analytics: round-2 sample is not larger than round 1; lower gamma");

    const double p_vote_a = (1.0 + eps) / 2.0;
    // A wins round 1 iff votes_A - votes_B >= eps2 * n, i.e. X >= n(1+eps2)/2
    const double ta = static_cast<double>(n) * (1.0 + eps2) / 2.0;
    const double tb = static_cast<double>(n) * (1.0 - eps2) / 2.0;
    const long long ka = static_cast<long long>(std::ceil(ta - 1e-9));
    const long long kb = static_cast<long long>(std::floor(tb + 1e-9));

    TwoRoundAnalytics out;
    out.n = n;
    out.n_round2 = n2;
    out.p_A_round1 = math::binom_tail_geq(n, ka, p_vote_a);
    out.p_B_round1 = 1.0 - math::binom_tail_geq(n, kb + 1, p_vote_a);
    out.p_undecided = 1.0 - out.p_A_round1 - out.p_B_round1;

    const double pa2 = math::binom_tail_geq(n2, n2 / 2 + 1, p_vote_a);           // X > n2/2
    const double pb2 = 1.0 - math::binom_tail_geq(n2, (n2 + 1) / 2, p_vote_a);   // X < n2/2
    const double tie2 = 1.0 - pa2 - pb2;  // nonzero only for even n2

    out.p_A_total = out.p_A_round1 + out.p_undecided * pa2;
    out.p_B_total = out.p_B_round1 + out.p_undecided * pb2;
    out.p_undecided_final = out.p_undecided * tie2;
    return out;
}

struct MechanismSimulation {
    double freq_A = 0.0;
    double freq_B = 0.0;
    double freq_two_rounds = 0.0;
    double mean_rounds = 1.0;
    long long reps = 0;
};

/// Monte Carlo execution of the two-round protocol with voters drawn from the
/// issue's preference distribution (everyone sampled votes, by the sample-size
/// guarantee). Replicate r consumes only the stream keyed by (seed, r).
inline MechanismSimulation simulate_mechanism(const MechanismConfig& cfg, const Issue& issue,
                                              long long reps, std::uint64_t seed) {
    if (reps < 100) throw std::invalid_argument("simulate_mechanism: reps must be >= 100");
    const double issue_eps = issue.s_a.total() - issue.s_b.total();
    if (!(issue_eps > 0.0))
        throw std::domain_error("simulate_mechanism: issue has zero expected margin");
    if (std::abs(issue_eps - cfg.epsilon) > 1e-9)
        throw std::invalid_argument("simulate_mechanism: config epsilon disagrees with the issue");

    const double eps2 = cfg.gamma * cfg.epsilon;
    const long long n = sample_size(cfg.epsilon, cfg.force_odd);
    const long long n2 = sample_size(eps2, cfg.force_odd);
    if (n2 <= n)
        throw std::invalid_argument(
            "simulate_mechanism: round-2 sample is not larger than round 1; lower gamma");
    const double p_vote_a = issue.s_a.total();
    const long long ka = static_cast<long long>(
        std::ceil(static_cast<double>(n) * (1.0 + eps2) / 2.0 - 1e-9));
    const long long kb = static_cast<long long>(
        std::floor(static_cast<double>(n) * (1.0 - eps2) / 2.0 + 1e-9));

    struct Counts {
        long long a = 0, b = 0, second = 0;
    };
    const auto run_chunk = [&](long long lo, long long hi) {
        Counts k;
        for (long long r = lo; r < hi; ++r) {
            CounterRng rng(seed, static_cast<std::uint64_t>(r));
            const long long x = sample_binomial(rng, n, p_vote_a);
            if (x >= ka) {
                ++k.a;
            } else if (x <= kb) {
                ++k.b;
            } else {
                ++k.second;
                const long long x2 = sample_binomial(rng, n2, p_vote_a);
                if (2 * x2 > n2) ++k.a;
                else if (2 * x2 < n2) ++k.b;
                // even-n2 tie: final outcome stays undecided
            }
        }
        return k;
    };

    std::vector<Counts> partial = util::parallel_map<Counts>(reps, run_chunk);
    Counts total;
    for (const auto& k : partial) {
        total.a += k.a;
        total.b += k.b;
        total.second += k.second;
    }
    MechanismSimulation out;
    out.reps = reps;
    out.freq_A = static_cast<double>(total.a) / static_cast<double>(reps);
    out.freq_B = static_cast<double>(total.b) / static_cast<double>(reps);
    out.freq_two_rounds = static_cast<double>(total.second) / static_cast<double>(reps);
    out.mean_rounds = 1.0 + out.freq_two_rounds;
    return out;
}

}  // namespace jurylab

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "jurylab/mechanism.hpp"
#include "jurylab/pivotality.hpp"
#include "jurylab/presets.hpp"

using namespace jurylab;

namespace {

// brute-force Pr(X >= k) over all outcomes, for small n
double tail_by_enumeration(long long n, long long k, double p) {
    double total = 0.0;
    for (long long x = k; x <= n; ++x)
        total += std::exp(math::binom_log_pmf(n, x, p));
    return total;
}

}  // namespace

TEST_CASE("sample size selection") {
    CHECK(sample_size(0.2) == 25);
    CHECK(sample_size(0.1, true) == 99);
    CHECK(sample_size(0.1, false) == 100);
    CHECK(sample_size(1.0) == 1);
    CHECK_THROWS_AS(sample_size(0.0), std::domain_error);
    CHECK_THROWS_AS(sample_size(1.5), std::domain_error);
}

TEST_CASE("full participation at the selected sample size") {
    const PolynomialPpm tie_sensitive{1.0, 1.0, 0.5};
    for (int i = 1; i <= 50; ++i) {
        const double eps = static_cast<double>(i) / 100.0;
        const long long n = sample_size(eps);
        CHECK(pivot_prob(tie_sensitive, static_cast<double>(n), eps) == 1.0);
    }
}

TEST_CASE("single-round majority win probability") {
    CHECK(single_round_winprob(0.01, 9999) == Catch::Approx(0.8413).margin(0.005));
    CHECK(single_round_winprob(0.3, 1) == Catch::Approx(0.65).margin(1e-12));
    CHECK(single_round_winprob(0.2, 25) ==
          Catch::Approx(tail_by_enumeration(25, 13, 0.6)).margin(1e-12));

    // uniform lower bound for small margins with odd samples
    for (double eps : {0.01, 0.02, 0.03, 0.04, 0.05}) {
        CHECK(single_round_winprob(eps, sample_size(eps)) >= 0.84);
    }
}

TEST_CASE("two-round analytics") {
    const auto a = two_round_analytics(MechanismConfig::make(0.01, 0.3));
    CHECK(a.n == 9999);
    CHECK(a.n_round2 == 111111);
    CHECK(a.p_A_round1 == Catch::Approx(0.7580).margin(0.005));
    CHECK(a.p_A_total + a.p_B_total + a.p_undecided_final == Catch::Approx(1.0).margin(1e-12));
    CHECK(a.p_A_total > single_round_winprob(0.01, 9999));

    // with the threshold near the full margin, the undecided band is exactly
    // Pr(|votes_A - votes_B| < eps * n)
    const auto tight = two_round_analytics(MechanismConfig::make(0.2, 0.9));
    double band = 0.0;
    for (long long x = 0; x <= 25; ++x) {
        if (std::abs(2.0 * x - 25.0) < 0.2 * 25.0)
            band += std::exp(math::binom_log_pmf(25, x, 0.6));
    }
    CHECK(tight.p_undecided == Catch::Approx(band).margin(1e-12));

    // round-2 sample must be strictly larger
    CHECK_THROWS_AS(two_round_analytics(MechanismConfig::make(0.2, 0.99)),
                    std::invalid_argument);
}

TEST_CASE("round-1 probabilities match a direct enumeration") {
    const auto a = two_round_analytics(MechanismConfig::make(0.2, 0.5));
    CHECK(a.n == 25);
    CHECK(a.n_round2 == 99);
    // A needs votes_A - votes_B >= 0.1 * 25 = 2.5, i.e. X >= 14
    CHECK(a.p_A_round1 == Catch::Approx(tail_by_enumeration(25, 14, 0.6)).margin(1e-12));
    // B needs the mirror image: X <= 11
    CHECK(a.p_B_round1 ==
          Catch::Approx(1.0 - tail_by_enumeration(25, 12, 0.6)).margin(1e-12));
}

TEST_CASE("supermajority threshold trades A's round-1 odds against B's") {
    double prev_ratio = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double gamma = static_cast<double>(i) / 10.0;
        const auto a = two_round_analytics(MechanismConfig::make(0.01, gamma));
        const double ratio = a.p_A_round1 / a.p_B_round1;
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("mechanism simulation agrees with the analytics") {
    const auto cfg = MechanismConfig::make(0.2, 0.5);
    const auto a = two_round_analytics(cfg);
    const auto sim = simulate_mechanism(cfg, presets::example1(), 100000, 4242);
    const auto sigma = [&](double p) { return std::sqrt(p * (1.0 - p) / 100000.0); };
    CHECK(std::abs(sim.freq_A - a.p_A_total) <= 4.0 * sigma(a.p_A_total));
    CHECK(std::abs(sim.freq_B - a.p_B_total) <= 4.0 * sigma(a.p_B_total));
    CHECK(std::abs(sim.freq_two_rounds - a.p_undecided) <= 4.0 * sigma(a.p_undecided));
    CHECK(sim.mean_rounds == Catch::Approx(1.0 + sim.freq_two_rounds).margin(1e-12));

    // determinism
    const auto again = simulate_mechanism(cfg, presets::example1(), 1000, 5);
    const auto again2 = simulate_mechanism(cfg, presets::example1(), 1000, 5);
    CHECK(again.freq_A == again2.freq_A);
    CHECK(again.freq_B == again2.freq_B);
    CHECK(again.freq_two_rounds == again2.freq_two_rounds);
}

TEST_CASE("degenerate unanimous issue always elects A") {
    const Issue unanimous = Issue::make(
        SupportFunction::from_points({{0.0, 0.0}, {1.0, 1.0}}),
        SupportFunction::from_points({{0.0, 0.0}, {1.0, 0.0}}), PolynomialPpm{});
    const auto sim = simulate_mechanism(MechanismConfig::make(1.0, 0.5), unanimous, 1000, 1);
    CHECK(sim.freq_A == 1.0);
}

TEST_CASE("mechanism validation") {
    CHECK_THROWS_AS(MechanismConfig::make(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(MechanismConfig::make(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(MechanismConfig::make(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_mechanism(MechanismConfig::make(0.2, 0.5),
                                       presets::example1(), 10, 1),
                    std::invalid_argument);
    // config margin must match the issue's expected margin
    CHECK_THROWS_AS(simulate_mechanism(MechanismConfig::make(0.3, 0.5),
                                       presets::example1(), 1000, 1),
                    std::invalid_argument);
}

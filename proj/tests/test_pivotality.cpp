#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "jurylab/math.hpp"
#include "jurylab/pivotality.hpp"

using namespace jurylab;

namespace {

// Independent check for the Poisson tie probability: direct double sum over
// the joint pmf, truncated six standard deviations past both means.
double poisson_tie_direct(double la, double lb) {
    const long long hi = static_cast<long long>(
        std::max(la, lb) + 6.0 * std::sqrt(std::max(la, lb)) + 10.0);
    double total = 0.0;
    for (long long j = 0; j <= hi; ++j) {
        const double lp = -la + j * std::log(la) - std::lgamma(static_cast<double>(j) + 1.0);
        const double lq = -lb + j * std::log(lb) - std::lgamma(static_cast<double>(j) + 1.0);
        total += std::exp(lp + lq);
    }
    return total;
}

const std::vector<double> log_spaced_n = {1,  2,  3,  5,  8,   13,  21,  34,
                                          56, 92, 152, 250, 411, 676, 1000};

}  // namespace

TEST_CASE("binomial tie probabilities") {
    CHECK(pivot_prob(BinomialPpm{}, 1, 0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(pivot_prob(BinomialPpm{}, 3, 0.0) == Catch::Approx(0.375).margin(1e-12));
    // n is a point estimate: round to nearest, minimum 1
    CHECK(pivot_prob(BinomialPpm{}, 0.2, 0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(pivot_prob(BinomialPpm{}, 2.6, 0.0) == Catch::Approx(0.375).margin(1e-12));
}

TEST_CASE("polynomial model") {
    const PolynomialPpm p{1.0, 1.0, 0.5};
    CHECK(pivot_prob(p, 1e4, 0.2) == Catch::Approx(0.05).margin(1e-15));
    CHECK(pivot_prob(p, 123456.0, 0.0) == 1.0);  // tie-sensitive cap at m = 0
    CHECK(pivot_prob(p, 0.0, 0.7) == 1.0);
    // cap applies exactly whenever m^alpha n^beta <= 1/q
    const PolynomialPpm q7{0.7, 1.5, 0.5};
    for (double n : {10.0, 100.0, 1000.0}) {
        for (double m : {0.01, 0.05, 0.3, 0.9}) {
            const double raw = 1.0 / (std::pow(m, q7.alpha) * std::pow(n, q7.beta));
            const double v = pivot_prob(q7, n, m);
            if (raw >= q7.q) CHECK(v == q7.q);
            else CHECK(v == Catch::Approx(raw).epsilon(1e-14));
        }
    }
}

TEST_CASE("poisson model against a direct double-sum oracle") {
    for (const auto& [n, m] : std::vector<std::pair<double, double>>{
             {100, 0.0}, {1e4, 0.0}, {1e4, 0.05}, {500, 0.3}}) {
        const double la = (1.0 + m) * n / 2.0;
        const double lb = (1.0 - m) * n / 2.0;
        CHECK(pivot_prob(PoissonPpm{}, n, m) ==
              Catch::Approx(poisson_tie_direct(la, lb)).epsilon(1e-10));
    }
    // scale at a tie: ~ 1/sqrt(2 pi n)
    const double v = pivot_prob(PoissonPpm{}, 1e4, 0.0);
    const double ref = 1.0 / std::sqrt(2.0 * M_PI * 1e4);
    CHECK(v >= 0.8 * ref);
    CHECK(v <= 1.2 * ref);
}

TEST_CASE("sampling model ignores n") {
    const SamplingPpm s{9};
    for (double m : {0.0, 0.1, 0.5, 1.0})
        CHECK(pivot_prob(s, 10.0, m) == pivot_prob(s, 1e8, m));
    CHECK(pivot_prob(SamplingPpm{1}, 1e6, 0.0) == 0.5);
}

TEST_CASE("domain and parameter validation") {
    CHECK_THROWS_AS(pivot_prob(BinomialPpm{}, -1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(pivot_prob(BinomialPpm{}, 10.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(pivot_prob(BinomialPpm{}, 10.0, 1.1), std::domain_error);
    CHECK_THROWS_AS(validate(PivotalityModel{SamplingPpm{0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PivotalityModel{PolynomialPpm{1.5, 1.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(PivotalityModel{PolynomialPpm{1.0, 0.0, 0.5}}),
                    std::invalid_argument);
}

TEST_CASE("vanishing pivotality classification") {
    CHECK(vanishing_pivotality(PivotalityModel{BinomialPpm{}}) == Vanishing::Strong);
    CHECK(vanishing_pivotality(PivotalityModel{PoissonPpm{}}) == Vanishing::Strong);
    CHECK(vanishing_pivotality(PivotalityModel{PolynomialPpm{0.3, 2.0, 1.0}}) == Vanishing::Weak);
    CHECK(vanishing_pivotality(PivotalityModel{SamplingPpm{9}}) == Vanishing::None);
}

TEST_CASE("tie sensitivity levels") {
    CHECK(tie_sensitivity_level(PivotalityModel{PolynomialPpm{0.7, 1.0, 0.5}}) == 0.7);
    CHECK(tie_sensitivity_level(PivotalityModel{SamplingPpm{1}}) == 0.5);
    CHECK(tie_sensitivity_level(PivotalityModel{SamplingPpm{9}}) ==
          Catch::Approx(0.24609375).margin(1e-12));
    CHECK(tie_sensitivity_level(PivotalityModel{BinomialPpm{}}) == 0.0);
    CHECK(tie_sensitivity_level(PivotalityModel{PoissonPpm{}}) == 0.0);
}

TEST_CASE("outputs stay in [0,1] and decrease in the margin") {
    const std::vector<PivotalityModel> models = {BinomialPpm{}, PoissonPpm{}, SamplingPpm{25},
                                                 PolynomialPpm{0.8, 1.0, 0.5}};
    for (const auto& model : models) {
        for (double n : log_spaced_n) {
            double prev = 2.0;
            for (int i = 0; i <= 100; ++i) {
                const double m = static_cast<double>(i) / 100;
                const double v = pivot_prob(model, n, m);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                CHECK(v <= prev + 1e-15);
                prev = v;
            }
        }
    }
}

TEST_CASE("pivot probability decreases with turnout") {
    // Poisson and Polynomial decrease along every integer step. The Binomial
    // family (and Sampling, which is Binomial in k) saw-tooths between odd and
    // even counts because a tie needs the leader at exactly floor(n/2); it is
    // monotone along each parity class, which is what we assert.
    for (double m : {0.0, 0.05, 0.3, 0.8}) {
        double prev = 2.0;
        for (double n : log_spaced_n) {
            const double v = pivot_prob(PoissonPpm{}, n, m);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        prev = 2.0;
        for (double n : log_spaced_n) {
            const double v = pivot_prob(PolynomialPpm{0.9, 1.0, 0.5}, n, m);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        for (int parity : {0, 1}) {
            double prev_b = 2.0;
            for (long long n = 1 + parity; n <= 1001; n += 2) {
                const double v = pivot_prob(BinomialPpm{}, static_cast<double>(n), m);
                CHECK(v <= prev_b + 1e-15);
                prev_b = v;
            }
        }
    }
}

TEST_CASE("tie probability scales like 1/sqrt(n)") {
    std::vector<double> xs, ys_b, ys_p;
    for (int i = 0; i <= 24; ++i) {
        const double n = std::pow(10.0, 2.0 + 4.0 * i / 24.0);
        xs.push_back(std::log(n));
        ys_b.push_back(std::log(pivot_prob(BinomialPpm{}, n, 0.0)));
        ys_p.push_back(std::log(pivot_prob(PoissonPpm{}, n, 0.0)));
    }
    CHECK(math::fit_line(xs, ys_b).slope == Catch::Approx(-0.5).margin(0.05));
    CHECK(math::fit_line(xs, ys_p).slope == Catch::Approx(-0.5).margin(0.05));
}

TEST_CASE("positive margins decay exponentially") {
    const double r = pivot_prob(BinomialPpm{}, 1e4, 0.1) / pivot_prob(BinomialPpm{}, 1e3, 0.1);
    CHECK(r < 1e-3);
}

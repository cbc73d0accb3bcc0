// Perceived-pivotality models: a voter's subjective probability of being
// decisive as a function of expected turnout n and expected margin m.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "jurylab/math.hpp"

namespace jurylab {

// Fully rational: tie probability of a Binomial race over the active voters.
struct BinomialPpm {};

// Fully rational variant with independent Poisson scores.
struct PoissonPpm {};

// Each voter estimates the race from a fixed-size sample of k others.
struct SamplingPpm {
    long long k = 1;
};

// Tie-sensitive heuristic: min{q, 1 / (m^alpha * n^beta)}.
struct PolynomialPpm {
    double q = 1.0;
    double alpha = 1.0;
    double beta = 0.5;
};

using PivotalityModel = std::variant<BinomialPpm, PoissonPpm, SamplingPpm, PolynomialPpm>;

enum class Vanishing { Strong, Weak, None };

inline void validate(const PivotalityModel& model) {
    if (const auto* s = std::get_if<SamplingPpm>(&model)) {
        if (s->k < 1) throw std::invalid_argument("SamplingPpm: k must be >= 1");
    } else if (const auto* p = std::get_if<PolynomialPpm>(&model)) {
        if (!(p->q > 0.0 && p->q <= 1.0))
            throw std::invalid_argument("PolynomialPpm: q must lie in (0,1]");
        if (!(p->alpha > 0.0) || !(p->beta > 0.0))
            throw std::invalid_argument("PolynomialPpm: alpha and beta must be positive");
    }
}

/// Perceived pivot probability p(n, m). n is the expected number of active
/// voters (real-valued; the Binomial family rounds it, minimum 1), m the
/// expected margin in [0, 1].
inline double pivot_prob(const PivotalityModel& model, double n, double m) {
    if (!(n >= 0.0)) throw std::domain_error("pivot_prob: n must be >= 0");
    if (!(m >= 0.0 && m <= 1.0)) throw std::domain_error("pivot_prob: m must lie in [0,1]");
    struct Visitor {
        double n, m;
        double operator()(const BinomialPpm&) const {
            const long long ni = std::max<long long>(1, static_cast<long long>(std::llround(n)));
            return math::binom_tie_pmf(ni, m);
        }
        double operator()(const PoissonPpm&) const {
            return math::poisson_tie_prob((1.0 + m) * n / 2.0, (1.0 - m) * n / 2.0);
        }
        double operator()(const SamplingPpm& s) const {
            return math::binom_tie_pmf(s.k, m);
        }
        double operator()(const PolynomialPpm& p) const {
            if (m <= 0.0 || n <= 0.0) return p.q;
            const double v = 1.0 / (std::pow(m, p.alpha) * std::pow(n, p.beta));
            return std::min(p.q, v < math::kProbFloor ? 0.0 : v);
        }
    };
    return std::visit(Visitor{n, m}, model);
}

/// Whether p(n, m) -> 0 as n grows, for all m >= 0 (Strong), only for m > 0
/// (Weak), or not at all (None). Classified per family, not estimated.
inline Vanishing vanishing_pivotality(const PivotalityModel& model) {
    struct Visitor {
        Vanishing operator()(const BinomialPpm&) const { return Vanishing::Strong; }
        Vanishing operator()(const PoissonPpm&) const { return Vanishing::Strong; }
        Vanishing operator()(const SamplingPpm&) const { return Vanishing::None; }
        Vanishing operator()(const PolynomialPpm&) const { return Vanishing::Weak; }
    };
    return std::visit(Visitor{}, model);
}

/// inf over n >= 1 of p(n, 0): how pivotal a voter feels at an expected tie,
/// no matter how large the electorate.
inline double tie_sensitivity_level(const PivotalityModel& model) {
    struct Visitor {
        double operator()(const BinomialPpm&) const { return 0.0; }
        double operator()(const PoissonPpm&) const { return 0.0; }
        double operator()(const SamplingPpm& s) const { return math::binom_tie_pmf(s.k, 0.0); }
        double operator()(const PolynomialPpm& p) const { return p.q; }
    };
    return std::visit(Visitor{}, model);
}

inline std::string ppm_name(const PivotalityModel& model) {
    struct Visitor {
        std::string operator()(const BinomialPpm&) const { return "binomial"; }
        std::string operator()(const PoissonPpm&) const { return "poisson"; }
        std::string operator()(const SamplingPpm&) const { return "sampling"; }
        std::string operator()(const PolynomialPpm&) const { return "polynomial"; }
    };
    return std::visit(Visitor{}, model);
}

}  // namespace jurylab

// Support functions and the electorate model built on them. A support function
// maps a cost threshold c to the fraction of the whole population that prefers
// a candidate and has voting cost at most c.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jurylab/pivotality.hpp"
#include "jurylab/rng.hpp"

namespace jurylab {

/// Effective cost of voting: max{0, (gross_cost - duty_benefit) / victory_value}.
inline double effective_cost(double gross_cost, double duty_benefit, double victory_value) {
    if (!(gross_cost >= 0.0)) throw std::domain_error("effective_cost: gross_cost must be >= 0");
    if (!(duty_benefit >= 0.0)) throw std::domain_error("effective_cost: duty_benefit must be >= 0");
    if (!(victory_value > 0.0)) throw std::domain_error("effective_cost: victory_value must be > 0");
    return std::max(0.0, (gross_cost - duty_benefit) / victory_value);
}

/// Piecewise-linear non-decreasing map c -> cumulative population mass on
/// [0, 1]. An atom of core supporters at c = 0 is the first breakpoint's mass;
/// an atom at c = 1 may be encoded as a duplicated final cost (vertical jump).
class SupportFunction {
public:
    using Point = std::pair<double, double>;  // (cost, cumulative mass)

    static SupportFunction from_points(std::vector<Point> pts) {
        if (pts.size() < 2)
            throw std::invalid_argument("support function needs at least two breakpoints");
        if (pts.front().first != 0.0)
            throw std::invalid_argument("breakpoint 0: first cost must be 0");
        if (pts.back().first != 1.0)
            throw std::invalid_argument("breakpoint " + std::to_string(pts.size() - 1) +
                                        ": last cost must be 1");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& [c, s] = pts[i];
            if (!(c >= 0.0 && c <= 1.0))
                throw std::invalid_argument("breakpoint " + std::to_string(i) +
                                            ": cost outside [0,1]");
            if (!(s >= 0.0 && s <= 1.0))
                throw std::invalid_argument("breakpoint " + std::to_string(i) +
                                            ": mass outside [0,1]");
            if (i > 0) {
                const bool final_jump = (c == 1.0 && pts[i - 1].first == 1.0 && i + 1 == pts.size());
                if (!(c > pts[i - 1].first) && !final_jump)
                    throw std::invalid_argument("breakpoint " + std::to_string(i) +
                                                ": costs must be strictly increasing");
                if (s < pts[i - 1].second)
                    throw std::invalid_argument("breakpoint " + std::to_string(i) +
                                                ": masses must be non-decreasing");
            }
        }
        SupportFunction f;
        f.pts_ = std::move(pts);
        return f;
    }

    /// Piecewise-linear value at c, exact at breakpoints.
    double operator()(double c) const {
        if (!(c >= 0.0 && c <= 1.0)) throw std::domain_error("support eval: c outside [0,1]");
        if (c == 1.0) return pts_.back().second;
        auto it = std::upper_bound(pts_.begin(), pts_.end(), c,
                                   [](double v, const Point& p) { return v < p.first; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        if (c == lo.first) return lo.second;
        const double t = (c - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
    }

    double mass_at_zero() const { return pts_.front().second; }
    double total() const { return pts_.back().second; }
    const std::vector<Point>& points() const { return pts_; }

    /// Smallest cost whose cumulative mass reaches `target` (in [0, total()]).
    /// Inverse-CDF partner of operator(); jumps map to their cost exactly.
    double inverse_mass(double target) const {
        if (target <= pts_.front().second) return 0.0;
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            const auto& lo = pts_[i - 1];
            const auto& hi = pts_[i];
            if (target <= hi.second) {
                if (hi.second == lo.second || hi.first == lo.first) return hi.first;
                const double t = (target - lo.second) / (hi.second - lo.second);
                return lo.first + t * (hi.first - lo.first);
            }
        }
        return 1.0;
    }

private:
    std::vector<Point> pts_;
};

enum class Candidate : std::uint8_t { A, B };

struct VoterDraw {
    Candidate candidate = Candidate::A;
    double cost = 0.0;

    bool operator==(const VoterDraw&) const = default;
};

/// Static description of an electorate: both support functions plus the
/// perceived-pivotality model. Candidate A is weakly more popular.
struct Issue {
    SupportFunction s_a;
    SupportFunction s_b;
    PivotalityModel ppm;

    static Issue make(SupportFunction a, SupportFunction b, PivotalityModel model) {
        constexpr double kMassTol = 1e-12;
        if (std::abs(a.total() + b.total() - 1.0) > kMassTol)
            throw std::invalid_argument("issue: s_A(1) + s_B(1) must equal 1");
        if (a.total() < b.total() - kMassTol)
            throw std::invalid_argument("issue: candidate A must be weakly more popular");
        validate(model);
        return Issue{std::move(a), std::move(b), std::move(model)};
    }
};

struct Election {
    Issue issue;
    long long population = 1;

    static Election make(Issue issue, long long population) {
        if (population < 1) throw std::invalid_argument("election: population must be >= 1");
        return Election{std::move(issue), population};
    }
};

/// Expected number of active voters at threshold c (not rounded).
inline double turnout_n(const Election& e, double c) {
    return (e.issue.s_a(c) + e.issue.s_b(c)) * static_cast<double>(e.population);
}

/// Expected margin |s_A - s_B| / (s_A + s_B) at threshold c.
inline double margin_m(const Issue& issue, double c) {
    const double sa = issue.s_a(c);
    const double sb = issue.s_b(c);
    const double tot = sa + sb;
    if (!(tot > 0.0)) throw std::domain_error("margin_m: zero total support at c");
    return std::abs(sa - sb) / tot;
}

/// All pivot points of the issue: costs c in (0,1) with equal positive support
/// and unequal support immediately to the right. For a plateau of equality,
/// only its right endpoint qualifies.
inline std::vector<double> pivot_points(const Issue& issue) {
    // merged breakpoint grid of both support functions
    std::vector<double> grid;
    for (const auto& p : issue.s_a.points()) grid.push_back(p.first);
    for (const auto& p : issue.s_b.points()) grid.push_back(p.first);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const auto diff = [&](double c) { return issue.s_a(c) - issue.s_b(c); };
    const auto total = [&](double c) { return issue.s_a(c) + issue.s_b(c); };

    // candidate zeros of the (piecewise-linear) difference
    std::vector<double> zeros;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double c0 = grid[i], c1 = grid[i + 1];
        if (c1 <= c0) continue;
        const double d0 = diff(c0), d1 = diff(c1);
        if (d0 == 0.0) zeros.push_back(c0);
        if (d0 * d1 < 0.0) zeros.push_back(c0 + (c1 - c0) * (d0 / (d0 - d1)));
    }
    if (diff(1.0) == 0.0) zeros.push_back(1.0);
    std::sort(zeros.begin(), zeros.end());
    zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());

    // keep zeros that are interior, carry positive support, and have a nonzero
    // difference immediately to the right (PWL: test the adjacent segment)
    std::vector<double> out;
    for (double z : zeros) {
        if (!(z > 0.0 && z < 1.0)) continue;
        if (!(total(z) > 0.0)) continue;
        auto next = std::upper_bound(grid.begin(), grid.end(), z);
        const double right = next != grid.end() ? *next : 1.0;
        const double probe = z + (right - z) * 0.5;
        bool nonzero_right;
        if (diff(probe) != 0.0) {
            nonzero_right = true;
        } else if (diff(right) != 0.0) {
            nonzero_right = true;  // zero at z but sloped away within the segment
        } else {
            nonzero_right = false;  // plateau continues; right endpoint will be retested
        }
        if (nonzero_right) out.push_back(z);
    }
    return out;
}

/// N i.i.d. voters drawn from the issue's joint (candidate, cost) distribution
/// by inverse-CDF. Fully determined by the seed; voter i consumes only the
/// stream keyed by (seed, i).
inline std::vector<VoterDraw> sample_voters(const Election& e, std::uint64_t seed) {
    const double pa = e.issue.s_a.total();
    std::vector<VoterDraw> out(static_cast<std::size_t>(e.population));
    for (long long i = 0; i < e.population; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        VoterDraw& v = out[static_cast<std::size_t>(i)];
        v.candidate = rng.next_unit() < pa ? Candidate::A : Candidate::B;
        const SupportFunction& s = v.candidate == Candidate::A ? e.issue.s_a : e.issue.s_b;
        v.cost = s.inverse_mass(rng.next_unit() * s.total());
    }
    return out;
}

}  // namespace jurylab

// Equilibrium analysis: fixed points of c = p(n(c), m(c)), their
// classification against pivot points, stability labels, convergence rates
// across population sizes, and the population-for-cost inversion.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jurylab/math.hpp"
#include "jurylab/support.hpp"

namespace jurylab {

enum class EquilibriumKind { Trivial, LeftOfPivot, RightOfPivot, Boundary };
enum class Stability { Stable, Unstable, Marginal };

struct EquilibriumPoint {
    double c = 0.0;
    double turnout = 0.0;   // n(c)
    double margin = 0.0;    // m(c)
    double residual = 0.0;  // |p(n(c), m(c)) - c| achieved by the solver
    EquilibriumKind kind = EquilibriumKind::Trivial;
    double pivot = std::numeric_limits<double>::quiet_NaN();  // limiting pivot, NaN if none
    Stability stability = Stability::Marginal;
    bool no_pivot_warning = false;
};

/// Best-response threshold map f(c) = p(n(c), m(c)). Where total support is
/// exactly zero the margin is taken as 0 (an empty tie).
inline double best_response(const Election& e, double c) {
    const double sa = e.issue.s_a(c);
    const double sb = e.issue.s_b(c);
    const double tot = sa + sb;
    const double m = tot > 0.0 ? std::abs(sa - sb) / tot : 0.0;
    return pivot_prob(e.issue.ppm, tot * static_cast<double>(e.population), m);
}

/// All equilibrium thresholds of the election, ascending. Sign changes of
/// f(c) - c on a uniform grid are refined by bisection to |f(c) - c| <= tol;
/// the endpoints qualify when |f - c| <= tol there; roots closer than 2*tol
/// are merged. Existence of a fixed point guarantees a non-empty result.
inline std::vector<EquilibriumPoint> find_equilibria(const Election& e, int grid_size = 4096,
                                                     double tol = 1e-10) {
    if (grid_size < 256)
        throw std::invalid_argument("find_equilibria: grid_size < 256 risks missed crossings");
    if (!(tol > 0.0 && tol <= 1e-3))
        throw std::invalid_argument("find_equilibria: tol must lie in (0, 1e-3]");

    const auto g = [&](double c) { return best_response(e, c) - c; };
    std::vector<double> roots;

    const double g0 = g(0.0);
    if (std::abs(g0) <= tol) roots.push_back(0.0);

    double prev_c = 0.0;
    double prev_g = g0;
    for (int i = 1; i <= grid_size; ++i) {
        const double c = static_cast<double>(i) / static_cast<double>(grid_size);
        const double gc = g(c);
        if (prev_g == 0.0 && prev_c > 0.0) {
            roots.push_back(prev_c);
        } else if (prev_g * gc < 0.0) {
            double lo = prev_c, hi = c, glo = prev_g;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (std::abs(gm) <= tol || mid == lo || mid == hi) {
                    lo = hi = mid;
                    break;
                }
                if ((glo < 0.0) == (gm < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_c = c;
        prev_g = gc;
    }
    if (std::abs(g(1.0)) <= tol && (roots.empty() || roots.back() != 1.0)) roots.push_back(1.0);

    std::sort(roots.begin(), roots.end());
    std::vector<EquilibriumPoint> out;
    for (double r : roots) {
        if (!out.empty() && r - out.back().c <= 2.0 * tol) continue;
        EquilibriumPoint p;
        p.c = r;
        p.turnout = turnout_n(e, r);
        const double tot = e.issue.s_a(r) + e.issue.s_b(r);
        p.margin = tot > 0.0 ? std::abs(e.issue.s_a(r) - e.issue.s_b(r)) / tot : 0.0;
        p.residual = std::abs(g(r));
        out.push_back(p);
    }
    if (out.empty())
        throw std::runtime_error(
            "find_equilibria: no fixed point located; increase grid_size (a continuous "
            "best-response map always has one)");
    return out;
}

/// Label a solved point against the issue's pivot points. Points below the
/// trivial band (half the smallest pivot) are Trivial; otherwise the side of
/// the nearest pivot decides. Near c = 1 the label is Boundary. Issues with no
/// pivot points use 10*tol + f(0) as the band and flag everything above it.
inline EquilibriumKind classify(EquilibriumPoint& point, const Election& e, double tol = 1e-10) {
    const std::vector<double> pivots = pivot_points(e.issue);
    point.no_pivot_warning = false;
    point.pivot = std::numeric_limits<double>::quiet_NaN();
    if (point.c >= 1.0 - tol) {
        point.kind = EquilibriumKind::Boundary;
        return point.kind;
    }
    if (pivots.empty()) {
        const double band = 10.0 * tol + best_response(e, 0.0);
        if (point.c < band) {
            point.kind = EquilibriumKind::Trivial;
        } else {
            point.kind = EquilibriumKind::Boundary;
            point.no_pivot_warning = true;
        }
        return point.kind;
    }
    const double band = 0.5 * pivots.front();
    if (point.c < band) {
        point.kind = EquilibriumKind::Trivial;
        return point.kind;
    }
    double nearest = pivots.front();
    for (double pv : pivots)
        if (std::abs(point.c - pv) < std::abs(point.c - nearest)) nearest = pv;
    point.pivot = nearest;
    point.kind = point.c >= nearest ? EquilibriumKind::RightOfPivot : EquilibriumKind::LeftOfPivot;
    return point.kind;
}

/// Sign-based stability: Stable when the best response pushes the threshold
/// back toward c from both sides, Unstable when it pushes away from both,
/// Marginal otherwise. At the domain boundary the outward side is skipped.
/// The probe interval must not contain another equilibrium.
inline Stability stability(const EquilibriumPoint& point, const Election& e, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("stability: delta must be positive");
    const double lo = std::max(0.0, point.c - delta);
    const double hi = std::min(1.0, point.c + delta);
    const auto g = [&](double c) { return best_response(e, c) - c; };

    // reject probe intervals holding a second root
    int flips = 0;
    double prev = g(lo);
    constexpr int kProbe = 48;
    for (int i = 1; i <= kProbe; ++i) {
        const double c = lo + (hi - lo) * static_cast<double>(i) / kProbe;
        const double cur = g(c);
        if (prev * cur < 0.0) ++flips;
        prev = cur;
    }
    if (flips > 1)
        throw std::invalid_argument("stability: probe interval contains another equilibrium");

    const bool has_left = point.c - delta >= 0.0;
    const bool has_right = point.c + delta <= 1.0;
    const int left_sign = has_left ? (g(point.c - delta) > 0.0 ? 1 : (g(point.c - delta) < 0.0 ? -1 : 0)) : 1;
    const int right_sign = has_right ? (g(point.c + delta) < 0.0 ? -1 : (g(point.c + delta) > 0.0 ? 1 : 0)) : -1;
    if (left_sign > 0 && right_sign < 0) return Stability::Stable;
    if (left_sign < 0 && right_sign > 0) return Stability::Unstable;
    return Stability::Marginal;
}

/// Default probe radius: half the gap to the nearest other equilibrium,
/// capped at 0.01 and clipped to keep the interval inside [0, 1].
inline double default_stability_delta(const EquilibriumPoint& point,
                                      const std::vector<EquilibriumPoint>& all) {
    double delta = 0.01;
    for (const auto& other : all) {
        const double d = std::abs(other.c - point.c);
        if (d > 0.0) delta = std::min(delta, 0.5 * d);
    }
    if (point.c > 0.0) delta = std::min(delta, point.c);
    if (point.c < 1.0) delta = std::min(delta, 1.0 - point.c);
    if (point.c == 0.0 || point.c == 1.0) delta = std::min(delta, 0.01);
    return std::max(delta, 1e-9);
}

/// find + classify + stability in one pass.
inline std::vector<EquilibriumPoint> solve_election(const Election& e, int grid_size = 4096,
                                                    double tol = 1e-10) {
    std::vector<EquilibriumPoint> pts = find_equilibria(e, grid_size, tol);
    for (auto& p : pts) classify(p, e, tol);
    for (auto& p : pts) p.stability = stability(p, e, default_stability_delta(p, pts));
    return pts;
}

/// Fraction of the population active at the equilibrium: s_A(c) + s_B(c).
inline double active_fraction(const Election& e, const EquilibriumPoint& point) {
    return e.issue.s_a(point.c) + e.issue.s_b(point.c);
}

struct ConvergenceFit {
    double slope = 0.0;      // least-squares slope of log|c_N - c*| vs log N
    double c_star = 0.0;     // limit used (nearest pivot, or 0 for the trivial family)
    int points_used = 0;
    int points_dropped = 0;  // leading N where the family was absent
    std::vector<double> c_values;  // per used N, ascending N order
};

/// One equilibrium family followed across population sizes: every entry shares
/// the same kind and the same limiting pivot (or 0 for the trivial family).
struct EquilibriumSeries {
    EquilibriumKind kind = EquilibriumKind::Trivial;
    double limit = 0.0;  // pivot point, or 0 for the trivial family
    std::vector<std::pair<long long, EquilibriumPoint>> entries;  // ascending N

    /// Distances to the limit must shrink monotonically over the tail of the
    /// computed range (the last three steps).
    bool tail_converges() const {
        const std::size_t n = entries.size();
        if (n < 2) return true;
        const std::size_t from = n >= 4 ? n - 4 : 0;
        double prev = std::abs(entries[from].second.c - limit);
        for (std::size_t i = from + 1; i < n; ++i) {
            const double d = std::abs(entries[i].second.c - limit);
            if (d > prev) return false;
            prev = d;
        }
        return true;
    }
};

namespace detail {

inline std::optional<EquilibriumPoint> pick_family(const std::vector<EquilibriumPoint>& pts,
                                                   EquilibriumKind family) {
    std::optional<EquilibriumPoint> best;
    for (const auto& p : pts) {
        if (p.kind != family) continue;
        if (family == EquilibriumKind::Trivial) {
            if (!best || p.c < best->c) best = p;
        } else {
            // nearest to its own pivot
            if (!best || std::abs(p.c - p.pivot) < std::abs(best->c - best->pivot)) best = p;
        }
    }
    return best;
}

}  // namespace detail

/// Follow one family across increasing population sizes. Leading N where the
/// family does not exist are skipped (`dropped`, when provided, reports how
/// many); once seen, the family must persist.
inline EquilibriumSeries solve_series(const Issue& issue, EquilibriumKind family,
                                      std::span<const double> populations, int grid_size = 4096,
                                      double tol = 1e-10, int* dropped = nullptr) {
    if (family == EquilibriumKind::Boundary)
        throw std::invalid_argument("solve_series: Boundary is not a convergent family");
    std::vector<double> sorted(populations.begin(), populations.end());
    std::sort(sorted.begin(), sorted.end());
    EquilibriumSeries series;
    series.kind = family;
    int skipped = 0;
    for (double Nd : sorted) {
        const auto N = static_cast<long long>(Nd);
        const Election e = Election::make(issue, N);
        auto pts = find_equilibria(e, grid_size, tol);
        for (auto& p : pts) classify(p, e, tol);
        const auto pick = detail::pick_family(pts, family);
        if (!pick) {
            if (series.entries.empty()) {
                ++skipped;
                continue;
            }
            throw std::invalid_argument(
                "solve_series: family vanished after appearing; refine the grid or N list");
        }
        series.limit = family == EquilibriumKind::Trivial ? 0.0 : pick->pivot;
        series.entries.emplace_back(N, *pick);
    }
    if (dropped) *dropped = skipped;
    return series;
}

/// Rate at which the selected equilibrium family approaches its limit across
/// population sizes. Leading N values where the family does not exist are
/// dropped; at least four usable points are required.
inline ConvergenceFit convergence_rate(const Issue& issue, EquilibriumKind family,
                                       std::span<const double> populations, int grid_size = 4096,
                                       double tol = 1e-10) {
    if (!std::holds_alternative<PolynomialPpm>(issue.ppm))
        throw std::invalid_argument("convergence_rate: requires a Polynomial pivotality model");
    int dropped = 0;
    const EquilibriumSeries series =
        solve_series(issue, family, populations, grid_size, tol, &dropped);
    std::vector<double> xs, ys, cs;
    for (const auto& [N, p] : series.entries) {
        const double dist = std::abs(p.c - series.limit);
        if (!(dist > 0.0))
            throw std::invalid_argument("convergence_rate: equilibrium coincides with its limit");
        xs.push_back(std::log(static_cast<double>(N)));
        ys.push_back(std::log(dist));
        cs.push_back(p.c);
    }
    if (xs.size() < 4)
        throw std::invalid_argument("convergence_rate: fewer than 4 usable population sizes");
    const auto fit = math::fit_line(xs, ys);
    ConvergenceFit out;
    out.slope = fit.slope;
    out.c_star = series.limit;
    out.points_used = static_cast<int>(xs.size());
    out.points_dropped = dropped;
    out.c_values = std::move(cs);
    return out;
}

/// Population size at which the given cost value is an equilibrium threshold
/// under a Polynomial model: inverts c = 1/(m^alpha n^beta) and divides the
/// active count by the active fraction.
inline double population_for_cost(const Issue& issue, double c, EquilibriumKind family) {
    const auto* poly = std::get_if<PolynomialPpm>(&issue.ppm);
    if (!poly)
        throw std::invalid_argument("population_for_cost: requires a Polynomial pivotality model");
    if (family != EquilibriumKind::LeftOfPivot && family != EquilibriumKind::RightOfPivot)
        throw std::invalid_argument("population_for_cost: family must be Left or Right of a pivot");
    if (!(c > 0.0 && c <= 1.0))
        throw std::domain_error("population_for_cost: c must lie in (0, 1]");
    if (c > poly->q)
        throw std::domain_error("population_for_cost: costs above the cap q are never equilibria");
    const double m = margin_m(issue, c);
    if (!(m > 0.0))
        throw std::domain_error("population_for_cost: zero margin (pivot point) has no finite N");
    const auto pivots = pivot_points(issue);
    if (!pivots.empty()) {
        double nearest = pivots.front();
        for (double pv : pivots)
            if (std::abs(c - pv) < std::abs(c - nearest)) nearest = pv;
        const bool right = c >= nearest;
        if (right != (family == EquilibriumKind::RightOfPivot))
            throw std::domain_error("population_for_cost: c lies on the other side of its pivot");
    }
    const double active = std::pow(c * std::pow(m, poly->alpha), -1.0 / poly->beta);
    const double population = active / (issue.s_a(c) + issue.s_b(c));
    if (!(population >= 1.0))
        throw std::domain_error("population_for_cost: no population of at least 1 induces this cost");
    return population;
}

inline std::string kind_name(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Trivial: return "trivial";
        case EquilibriumKind::LeftOfPivot: return "left";
        case EquilibriumKind::RightOfPivot: return "right";
        case EquilibriumKind::Boundary: return "boundary";
    }
    return "?";
}

inline std::string stability_name(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

}  // namespace jurylab

// Numerical primitives: normal CDF, log-space binomial/Poisson mass functions,
// stable tail sums and least-squares slope fits.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace jurylab::math {

// Probabilities smaller than this are flushed to exact zero.
inline constexpr double kProbFloor = 1e-300;

// Relative truncation threshold for series tail sums.
inline constexpr double kSeriesEps = 1e-18;

/// Standard normal CDF, absolute error well below 1e-12 over the useful range.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double log_choose(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// log Pr(Bin(n,p) = k); -inf when the outcome is impossible.
inline double binom_log_pmf(long long n, long long k, double p) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    return log_choose(n, k) + static_cast<double>(k) * std::log(p) +
           static_cast<double>(n - k) * std::log1p(-p);
}

/// Exact Pr(Bin(n,p) >= k) by summing the smaller tail with the pmf recurrence.
inline double binom_tail_geq(long long n, long long k, double p) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double mode = static_cast<double>(n + 1) * p;
    if (static_cast<double>(k) > mode) {
        // upper tail: terms shrink as j grows
        const double lp = binom_log_pmf(n, k, p);
        double acc = 1.0, term = 1.0;
        for (long long j = k; j < n; ++j) {
            term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * p / (1.0 - p);
            acc += term;
            if (term < acc * kSeriesEps) break;
        }
        return std::min(1.0, std::exp(lp + std::log(acc)));
    }
    // complement via the lower tail, summed downward from k-1
    const double lp = binom_log_pmf(n, k - 1, p);
    double acc = 1.0, term = 1.0;
    for (long long j = k - 1; j > 0; --j) {
        term *= static_cast<double>(j) / static_cast<double>(n - j + 1) * (1.0 - p) / p;
        acc += term;
        if (term < acc * kSeriesEps) break;
    }
    const double lower = std::min(1.0, std::exp(lp + std::log(acc)));
    return std::max(0.0, 1.0 - lower);
}

/// Tie mass of a Binomial race: Pr(Bin(n,(1+m)/2) = floor(n/2)).
/// Values below kProbFloor collapse to 0.
inline double binom_tie_pmf(long long n, double m) {
    if (n < 1) throw std::domain_error("binom_tie_pmf: n must be >= 1");
    const double lp = binom_log_pmf(n, n / 2, (1.0 + m) / 2.0);
    const double v = std::exp(lp);
    return v < kProbFloor ? 0.0 : v;
}

/// Pr(X_A = X_B) for independent Poissons: e^{-(la+lb)} * sum_j (la*lb)^j / (j!)^2.
/// The series is unimodal in j; it is summed outward from its peak in scaled
/// space and truncated at kSeriesEps relative weight, which reproduces the full
/// sum to well below the requested accuracy.
inline double poisson_tie_prob(double la, double lb) {
    if (la < 0.0 || lb < 0.0) throw std::domain_error("poisson_tie_prob: negative rate");
    const double prod = la * lb;
    if (prod == 0.0) {
        const double v = std::exp(-(la + lb));
        return v < kProbFloor ? 0.0 : v;
    }
    const double logprod = std::log(la) + std::log(lb);
    const long long jstar = static_cast<long long>(std::sqrt(prod));
    const double lpeak = static_cast<double>(jstar) * logprod -
                         2.0 * std::lgamma(static_cast<double>(jstar) + 1.0);
    double acc = 1.0;
    double term = 1.0;
    for (long long j = jstar;; ++j) {
        const double d = static_cast<double>(j + 1);
        term *= prod / (d * d);
        if (!(term > acc * kSeriesEps)) break;
        acc += term;
    }
    term = 1.0;
    for (long long j = jstar; j > 0; --j) {
        const double d = static_cast<double>(j);
        term *= d * d / prod;
        if (!(term > acc * kSeriesEps)) break;
        acc += term;
    }
    const double logp = -(la + lb) + lpeak + std::log(acc);
    if (logp < std::log(kProbFloor)) return 0.0;
    return std::min(1.0, std::exp(logp));
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace jurylab::math

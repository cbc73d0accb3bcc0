// Experiment runner: validated configs for every CLI command, deterministic
// result tables, and the bundled presets that regenerate the reference series.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jurylab/equilibrium.hpp"
#include "jurylab/io.hpp"
#include "jurylab/mechanism.hpp"
#include "jurylab/presets.hpp"
#include "jurylab/support.hpp"
#include "jurylab/version.hpp"
#include "jurylab/winprob.hpp"

namespace jurylab {

enum class Command { Equilibria, WinProb, SweepAlpha, SweepN, Rate, Invert, Mechanism, Limit };

struct ExperimentConfig {
    Command command = Command::Equilibria;
    std::string issue_file;                 // path; empty when `issue` is set inline
    std::optional<Issue> issue;             // inline issue (bundled presets)
    std::vector<long long> populations;     // --N
    std::vector<double> alphas;             // --alpha
    std::vector<double> costs;              // --c (invert)
    std::vector<std::string> methods{"normal"};  // subset of exact|normal|mc
    long long reps = 100000;
    std::uint64_t seed = 42;
    int grid_size = 4096;
    double tol = 1e-10;
    double epsilon = 0.0;                   // mechanism
    std::vector<double> gammas;             // mechanism
    bool simulate = false;                  // mechanism: also run the Monte Carlo
    double beta = 0.5;                      // rate / limit
    double c_star = 0.0;                    // limit
    std::string family = "right";           // rate / invert
    std::string output;                     // path; empty or "-" = stdout
    std::string format = "csv";             // csv | json
};

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Equilibria: return "equilibria";
        case Command::WinProb: return "winprob";
        case Command::SweepAlpha: return "sweep-alpha";
        case Command::SweepN: return "sweep-n";
        case Command::Rate: return "rate";
        case Command::Invert: return "invert";
        case Command::Mechanism: return "mechanism";
        case Command::Limit: return "limit";
    }
    return "?";
}

namespace detail {

inline Issue resolve_issue(const ExperimentConfig& cfg) {
    if (cfg.issue) return *cfg.issue;
    if (cfg.issue_file.empty())
        throw std::invalid_argument(std::string(command_name(cfg.command)) +
                                    ": an issue is required (--issue <file>)");
    return io::load_issue(cfg.issue_file);
}

inline EquilibriumKind family_from_name(const std::string& name) {
    if (name == "right") return EquilibriumKind::RightOfPivot;
    if (name == "left") return EquilibriumKind::LeftOfPivot;
    if (name == "trivial") return EquilibriumKind::Trivial;
    throw std::invalid_argument("unknown family \"" + name + "\" (use trivial|left|right)");
}

inline void require_populations(const ExperimentConfig& cfg) {
    if (cfg.populations.empty())
        throw std::invalid_argument(std::string(command_name(cfg.command)) +
                                    ": --N must list at least one population size");
}

inline WinProbEstimate run_method(const std::string& method, const Election& e, double c,
                                  long long reps, std::uint64_t seed) {
    if (method == "exact") return winprob_exact(e, c);
    if (method == "normal") return winprob_normal(e, c);
    if (method == "mc") return winprob_montecarlo(e, c, reps, seed);
    throw std::invalid_argument("unknown method \"" + method + "\" (use exact|normal|mc)");
}

inline io::Cell pivot_cell(const EquilibriumPoint& p) {
    if (std::isnan(p.pivot)) return std::string{};
    return p.pivot;
}

}  // namespace detail

inline io::ResultTable run_experiment(const ExperimentConfig& cfg) {
    using io::Cell;
    if (!(cfg.tol > 0.0 && cfg.tol <= 1e-3))
        throw std::invalid_argument("tol must lie in (0, 1e-3]");
    io::ResultTable table;
    const auto tail = [&](std::vector<Cell>& row) {
        row.emplace_back(static_cast<long long>(cfg.seed));
        row.emplace_back(std::string(kVersion));
    };

    switch (cfg.command) {
        case Command::Equilibria: {
            detail::require_populations(cfg);
            const Issue issue = detail::resolve_issue(cfg);
            table.columns = {"N",     "c",         "n",        "m",    "kind",
                             "pivot", "stability", "residual", "seed", "version"};
            auto ns = cfg.populations;
            std::sort(ns.begin(), ns.end());
            for (long long N : ns) {
                const Election e = Election::make(issue, N);
                for (const auto& p : solve_election(e, cfg.grid_size, cfg.tol)) {
                    std::vector<Cell> row{N,
                                          p.c,
                                          p.turnout,
                                          p.margin,
                                          kind_name(p.kind),
                                          detail::pivot_cell(p),
                                          stability_name(p.stability),
                                          p.residual};
                    tail(row);
                    table.add_row(std::move(row));
                }
            }
            return table;
        }

        case Command::WinProb: {
            detail::require_populations(cfg);
            const Issue issue = detail::resolve_issue(cfg);
            table.columns = {"N",     "c",    "kind",     "method", "value",
                             "stderr", "tie_prob", "seed", "version"};
            auto ns = cfg.populations;
            std::sort(ns.begin(), ns.end());
            auto methods = cfg.methods;
            std::sort(methods.begin(), methods.end());
            for (long long N : ns) {
                const Election e = Election::make(issue, N);
                auto pts = find_equilibria(e, cfg.grid_size, cfg.tol);
                for (auto& p : pts) classify(p, e, cfg.tol);
                for (const auto& p : pts) {
                    for (const auto& method : methods) {
                        const auto est = detail::run_method(method, e, p.c, cfg.reps, cfg.seed);
                        std::vector<Cell> row{N,         p.c,        kind_name(p.kind), method,
                                              est.value, est.stderr_, est.tie_prob};
                        tail(row);
                        table.add_row(std::move(row));
                    }
                }
            }
            return table;
        }

        case Command::SweepN: {
            detail::require_populations(cfg);
            const Issue issue = detail::resolve_issue(cfg);
            const std::string method = cfg.methods.empty() ? "normal" : cfg.methods.front();
            table.columns = {"N",  "which", "c",    "n",       "m",   "active_fraction",
                             "method", "wp_A", "wp_B", "seed", "version"};
            auto ns = cfg.populations;
            std::sort(ns.begin(), ns.end());
            for (long long N : ns) {
                const Election e = Election::make(issue, N);
                auto pts = find_equilibria(e, cfg.grid_size, cfg.tol);
                for (auto& p : pts) classify(p, e, cfg.tol);
                const auto left = detail::pick_family(pts, EquilibriumKind::LeftOfPivot);
                const auto right = detail::pick_family(pts, EquilibriumKind::RightOfPivot);
                if (!left || !right)
                    throw std::runtime_error(
                        "sweep-n: N=" + std::to_string(N) +
                        " lacks a left/right equilibrium pair; increase --grid or choose a "
                        "tie-sensitive model");
                for (const auto& [label, p] : {std::pair{"c-", *left}, std::pair{"c+", *right}}) {
                    const auto est = detail::run_method(method, e, p.c, cfg.reps, cfg.seed);
                    const double wp_b = std::max(0.0, 1.0 - est.value - est.tie_prob);
                    std::vector<Cell> row{N,
                                          std::string(label),
                                          p.c,
                                          p.turnout,
                                          p.margin,
                                          active_fraction(e, p),
                                          method,
                                          est.value,
                                          wp_b};
                    tail(row);
                    table.add_row(std::move(row));
                }
            }
            return table;
        }

        case Command::SweepAlpha: {
            detail::require_populations(cfg);
            if (cfg.populations.size() != 1)
                throw std::invalid_argument("sweep-alpha: exactly one --N value is required");
            if (cfg.alphas.empty())
                throw std::invalid_argument("sweep-alpha: --alpha must list at least one value");
            const Issue base = detail::resolve_issue(cfg);
            const auto* poly = std::get_if<PolynomialPpm>(&base.ppm);
            if (!poly)
                throw std::invalid_argument("sweep-alpha: issue must use a polynomial model");
            const std::string method = cfg.methods.empty() ? "normal" : cfg.methods.front();
            table.columns = {"alpha", "N",    "c",    "n",    "m",
                             "method", "wp_A", "seed", "version"};
            auto alphas = cfg.alphas;
            std::sort(alphas.begin(), alphas.end());
            const long long N = cfg.populations.front();
            for (double alpha : alphas) {
                const Issue issue = Issue::make(base.s_a, base.s_b,
                                                PolynomialPpm{poly->q, alpha, poly->beta});
                const Election e = Election::make(issue, N);
                auto pts = find_equilibria(e, cfg.grid_size, cfg.tol);
                for (auto& p : pts) classify(p, e, cfg.tol);
                const auto right = detail::pick_family(pts, EquilibriumKind::RightOfPivot);
                if (!right)
                    throw std::runtime_error(
                        "sweep-alpha: no right-of-pivot equilibrium at alpha=" +
                        io::format_double(alpha) + "; increase --grid");
                const auto est = detail::run_method(method, e, right->c, cfg.reps, cfg.seed);
                std::vector<Cell> row{alpha, N, right->c, right->turnout, right->margin,
                                      method, est.value};
                tail(row);
                table.add_row(std::move(row));
            }
            return table;
        }

        case Command::Rate: {
            detail::require_populations(cfg);
            const Issue base = detail::resolve_issue(cfg);
            const auto* poly = std::get_if<PolynomialPpm>(&base.ppm);
            if (!poly) throw std::invalid_argument("rate: issue must use a polynomial model");
            std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{poly->alpha}
                                                            : cfg.alphas;
            std::sort(alphas.begin(), alphas.end());
            const EquilibriumKind family = detail::family_from_name(cfg.family);
            table.columns = {"family", "alpha", "beta",  "c_star", "slope",
                             "used",   "dropped", "seed", "version"};
            std::vector<double> ns(cfg.populations.begin(), cfg.populations.end());
            std::sort(ns.begin(), ns.end());
            for (double alpha : alphas) {
                const Issue issue = Issue::make(base.s_a, base.s_b,
                                                PolynomialPpm{poly->q, alpha, cfg.beta});
                const auto fit = convergence_rate(issue, family, ns, cfg.grid_size, cfg.tol);
                std::vector<Cell> row{cfg.family,
                                      alpha,
                                      cfg.beta,
                                      fit.c_star,
                                      fit.slope,
                                      static_cast<long long>(fit.points_used),
                                      static_cast<long long>(fit.points_dropped)};
                tail(row);
                table.add_row(std::move(row));
            }
            return table;
        }

        case Command::Invert: {
            if (cfg.costs.empty())
                throw std::invalid_argument("invert: --c must list at least one cost value");
            const Issue issue = detail::resolve_issue(cfg);
            const EquilibriumKind family = detail::family_from_name(cfg.family);
            table.columns = {"c", "m", "n_active", "N", "seed", "version"};
            auto costs = cfg.costs;
            std::sort(costs.begin(), costs.end());
            for (double c : costs) {
                const double N = population_for_cost(issue, c, family);
                const double m = margin_m(issue, c);
                std::vector<Cell> row{c, m, N * (issue.s_a(c) + issue.s_b(c)), N};
                tail(row);
                table.add_row(std::move(row));
            }
            return table;
        }

        case Command::Mechanism: {
            if (!(cfg.epsilon > 0.0))
                throw std::invalid_argument("mechanism: --epsilon is required and must be > 0");
            if (cfg.gammas.empty())
                throw std::invalid_argument("mechanism: --gamma must list at least one value");
            table.columns = {"epsilon",    "gamma",     "n",         "n_round2",
                             "p_A_round1", "p_B_round1", "p_undecided", "p_A_total",
                             "p_B_total",  "seed",      "version"};
            if (cfg.simulate) {
                table.columns.insert(table.columns.end() - 2,
                                     {"freq_A", "freq_B", "freq_two_rounds", "mean_rounds"});
            }
            auto gammas = cfg.gammas;
            std::sort(gammas.begin(), gammas.end());
            for (double gamma : gammas) {
                const auto mc = MechanismConfig::make(cfg.epsilon, gamma);
                const auto a = two_round_analytics(mc);
                std::vector<Cell> row{cfg.epsilon, gamma,        a.n,
                                      a.n_round2,  a.p_A_round1, a.p_B_round1,
                                      a.p_undecided, a.p_A_total, a.p_B_total};
                if (cfg.simulate) {
                    const Issue issue = cfg.issue || !cfg.issue_file.empty()
                                            ? detail::resolve_issue(cfg)
                                            : presets::issue_with_margin(cfg.epsilon);
                    const auto sim = simulate_mechanism(mc, issue, cfg.reps, cfg.seed);
                    row.insert(row.end(),
                               {sim.freq_A, sim.freq_B, sim.freq_two_rounds, sim.mean_rounds});
                }
                tail(row);
                table.add_row(std::move(row));
            }
            return table;
        }

        case Command::Limit: {
            if (cfg.alphas.empty())
                throw std::invalid_argument("limit: --alpha must list at least one value");
            if (!(cfg.c_star > 0.0 && cfg.c_star < 1.0))
                throw std::invalid_argument("limit: --c-star must lie in (0, 1)");
            table.columns = {"alpha", "beta", "c_star", "regime", "limit", "seed", "version"};
            auto alphas = cfg.alphas;
            std::sort(alphas.begin(), alphas.end());
            for (double alpha : alphas) {
                const auto lim = classify_limit(alpha, cfg.beta, cfg.c_star);
                std::vector<Cell> row{alpha, cfg.beta, cfg.c_star, regime_name(lim.regime),
                                      lim.limit_value};
                tail(row);
                table.add_row(std::move(row));
            }
            return table;
        }
    }
    throw std::logic_error("run_experiment: unhandled command");
}

/// Render and write per the config; returns the serialized text.
inline std::string run_and_write(const ExperimentConfig& cfg) {
    const io::ResultTable table = run_experiment(cfg);
    std::string text;
    if (cfg.format == "csv") {
        text = io::to_csv(table);
    } else if (cfg.format == "json") {
        text = io::to_json_text(table);
    } else {
        throw std::invalid_argument("unknown format \"" + cfg.format + "\" (use csv|json)");
    }
    io::write_text(cfg.output, text);
    return text;
}

/// Embedded experiment presets reproducing the reference data series.
inline std::vector<std::pair<std::string, ExperimentConfig>> bundled_examples() {
    std::vector<std::pair<std::string, ExperimentConfig>> out;

    ExperimentConfig eq;
    eq.command = Command::Equilibria;
    eq.issue = presets::example1();
    eq.populations = {10000, 1000000};
    out.emplace_back("example1-equilibria", eq);

    ExperimentConfig wp;
    wp.command = Command::SweepN;
    wp.issue = presets::example1();
    wp.populations = {1000, 10000, 100000, 1000000, 10000000, 100000000};
    wp.methods = {"normal"};
    out.emplace_back("example1-winprob-vs-N", wp);

    ExperimentConfig sweep;
    sweep.command = Command::SweepAlpha;
    sweep.issue = presets::example1();
    sweep.populations = {1000000};
    sweep.alphas = {0.5, 0.625, 0.75, 0.875, 1.0, 1.25};
    sweep.grid_size = 1 << 20;  // small-alpha equilibria hug the pivot point
    out.emplace_back("example1-alpha-sweep", sweep);

    ExperimentConfig inv;
    inv.command = Command::Invert;
    inv.issue = presets::example1();
    inv.costs = {0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};
    inv.family = "right";
    out.emplace_back("example1-population-for-cost", inv);

    ExperimentConfig mech;
    mech.command = Command::Mechanism;
    mech.epsilon = 0.01;
    mech.gammas = {0.3};
    out.emplace_back("mechanism-supermajority", mech);

    return out;
}

}  // namespace jurylab

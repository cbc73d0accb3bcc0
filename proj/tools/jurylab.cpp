// jurylab — command-line runner for the abstention-election toolkit.
//
//   jurylab <command> --issue <file> [--N a,b,c] [--alpha ...]
//           [--methods exact,normal,mc] [--reps R] [--seed S]
//           [--grid G] [--tol T] --out <file> --format csv|json
//
// Commands: equilibria winprob sweep-alpha sweep-n rate invert mechanism limit
// plus `examples` for the embedded presets. JURYLAB_THREADS caps workers.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jurylab/runner.hpp"

namespace {

void add_common(CLI::App* cmd, jurylab::ExperimentConfig& cfg) {
    cmd->add_option("--issue", cfg.issue_file, "issue definition JSON file");
    cmd->add_option("--seed", cfg.seed, "base seed for stochastic methods");
    cmd->add_option("--reps", cfg.reps, "Monte Carlo replicates");
    cmd->add_option("--grid", cfg.grid_size, "solver scan grid size (>= 256)");
    cmd->add_option("--tol", cfg.tol, "fixed-point tolerance, in (0, 1e-3]");
    cmd->add_option("--out", cfg.output, "output file (default: stdout)");
    cmd->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abstention-election equilibrium and sortition toolkit"};
    app.require_subcommand(0, 1);

    jurylab::ExperimentConfig cfg;
    std::string bundled_name;
    bool list_bundled = false;

    auto* eq = app.add_subcommand("equilibria", "solve equilibrium thresholds per N");
    eq->add_option("--N", cfg.populations, "population sizes")->delimiter(',');
    add_common(eq, cfg);

    auto* wp = app.add_subcommand("winprob", "win probabilities at every equilibrium");
    wp->add_option("--N", cfg.populations, "population sizes")->delimiter(',');
    wp->add_option("--methods", cfg.methods, "exact,normal,mc")->delimiter(',');
    add_common(wp, cfg);

    auto* sn = app.add_subcommand("sweep-n", "left/right equilibria and win probs across N");
    sn->add_option("--N", cfg.populations, "population sizes")->delimiter(',');
    sn->add_option("--methods", cfg.methods, "win-prob method (first entry used)")->delimiter(',');
    add_common(sn, cfg);

    auto* sa = app.add_subcommand("sweep-alpha", "right-equilibrium win prob across alpha");
    sa->add_option("--N", cfg.populations, "population size (single value)")->delimiter(',');
    sa->add_option("--alpha", cfg.alphas, "alpha values")->delimiter(',');
    sa->add_option("--methods", cfg.methods, "win-prob method (first entry used)")->delimiter(',');
    add_common(sa, cfg);

    auto* rate = app.add_subcommand("rate", "convergence-rate fit of an equilibrium family");
    rate->add_option("--N", cfg.populations, "population sizes (>= 4 usable)")->delimiter(',');
    rate->add_option("--alpha", cfg.alphas, "alpha values (default: issue's)")->delimiter(',');
    rate->add_option("--beta", cfg.beta, "beta for the swept models");
    rate->add_option("--family", cfg.family, "trivial|left|right");
    add_common(rate, cfg);

    auto* inv = app.add_subcommand("invert", "population size that induces a given threshold");
    inv->add_option("--c", cfg.costs, "cost values")->delimiter(',');
    inv->add_option("--family", cfg.family, "left|right");
    add_common(inv, cfg);

    auto* mech = app.add_subcommand("mechanism", "two-round sortition analytics");
    mech->add_option("--epsilon", cfg.epsilon, "full-participation margin")->required();
    mech->add_option("--gamma", cfg.gammas, "supermajority fractions")->delimiter(',');
    mech->add_flag("--simulate", cfg.simulate, "also run the Monte Carlo protocol");
    add_common(mech, cfg);

    auto* lim = app.add_subcommand("limit", "limiting win probability classification");
    lim->add_option("--alpha", cfg.alphas, "alpha values")->delimiter(',');
    lim->add_option("--beta", cfg.beta, "beta");
    lim->add_option("--c-star", cfg.c_star, "pivot point in (0,1)")->required();
    add_common(lim, cfg);

    auto* ex = app.add_subcommand("examples", "run or list the embedded presets");
    ex->add_option("--name", bundled_name, "preset to run");
    ex->add_flag("--list", list_bundled, "list preset names");
    ex->add_option("--out", cfg.output, "output file (default: stdout)");
    ex->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (ex->parsed()) {
            const auto presets = jurylab::bundled_examples();
            if (list_bundled || bundled_name.empty()) {
                for (const auto& [name, preset] : presets)
                    std::printf("%s (%s)\n", name.c_str(), jurylab::command_name(preset.command));
                return 0;
            }
            for (const auto& [name, preset] : presets) {
                if (name != bundled_name) continue;
                jurylab::ExperimentConfig run = preset;
                run.output = cfg.output;
                run.format = cfg.format;
                jurylab::run_and_write(run);
                return 0;
            }
            std::fprintf(stderr, "error: no preset named \"%s\" (try --list)\n",
                         bundled_name.c_str());
            return 1;
        }
        if (eq->parsed()) cfg.command = jurylab::Command::Equilibria;
        else if (wp->parsed()) cfg.command = jurylab::Command::WinProb;
        else if (sn->parsed()) cfg.command = jurylab::Command::SweepN;
        else if (sa->parsed()) cfg.command = jurylab::Command::SweepAlpha;
        else if (rate->parsed()) cfg.command = jurylab::Command::Rate;
        else if (inv->parsed()) cfg.command = jurylab::Command::Invert;
        else if (mech->parsed()) cfg.command = jurylab::Command::Mechanism;
        else if (lim->parsed()) cfg.command = jurylab::Command::Limit;
        else {
            std::fprintf(stderr, "error: a command is required (try --help)\n");
            return 1;
        }
        jurylab::run_and_write(cfg);
        return 0;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}

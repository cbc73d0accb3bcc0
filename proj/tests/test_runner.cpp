#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "jurylab/io.hpp"
#include "jurylab/runner.hpp"

using namespace jurylab;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("issue config round trip") {
    const auto path = write_temp("jurylab_issue_ok.json", R"({
        "s_A": [[0.0, 0.1], [1.0, 0.6]],
        "s_B": [[0.0, 0.4], [1.0, 0.4]],
        "ppm": {"kind": "polynomial", "q": 1.0, "alpha": 1.0, "beta": 0.5}
    })");
    const Issue issue = io::load_issue(path.string());
    CHECK(issue.s_a(0.6) == Catch::Approx(0.4).margin(1e-15));
    CHECK(std::get<PolynomialPpm>(issue.ppm).beta == 0.5);

    const auto j = io::issue_to_json(issue);
    const Issue back = io::parse_issue(j);
    CHECK(back.s_b(0.2) == issue.s_b(0.2));
}

TEST_CASE("issue config diagnostics name the offender") {
    const auto path = write_temp("jurylab_issue_bad.json", R"({
        "s_A": [[0.0, 0.1], [0.4, 0.05], [1.0, 0.6]],
        "s_B": [[0.0, 0.4], [1.0, 0.4]],
        "ppm": {"kind": "polynomial"}
    })");
    CHECK_THROWS_WITH(io::load_issue(path.string()),
                      Catch::Matchers::ContainsSubstring("breakpoint 1"));

    const auto missing = write_temp("jurylab_issue_missing.json", R"({"s_A": []})");
    CHECK_THROWS_WITH(io::load_issue(missing.string()),
                      Catch::Matchers::ContainsSubstring("missing \"s_B\""));

    CHECK_THROWS_WITH(io::parse_ppm(io::json{{"kind", "magic"}}),
                      Catch::Matchers::ContainsSubstring("unknown kind"));
    CHECK_THROWS_AS(io::load_issue("/nonexistent/path.json"), std::runtime_error);
}

TEST_CASE("ppm config parsing") {
    CHECK(std::holds_alternative<BinomialPpm>(io::parse_ppm(io::json{{"kind", "binomial"}})));
    CHECK(std::holds_alternative<PoissonPpm>(io::parse_ppm(io::json{{"kind", "poisson"}})));
    const auto samp = io::parse_ppm(io::json{{"kind", "sampling"}, {"k", 9}});
    CHECK(std::get<SamplingPpm>(samp).k == 9);
    CHECK_THROWS_AS(io::parse_ppm(io::json{{"kind", "sampling"}, {"k", 0}}),
                    std::invalid_argument);
}

TEST_CASE("equilibria experiment output is deterministic and sorted") {
    ExperimentConfig cfg;
    cfg.command = Command::Equilibria;
    cfg.issue = presets::example1();
    cfg.populations = {1000000, 10000};  // deliberately unsorted

    const auto t1 = run_experiment(cfg);
    const auto t2 = run_experiment(cfg);
    CHECK(io::to_csv(t1) == io::to_csv(t2));

    REQUIRE(t1.columns.size() == 10);
    CHECK(t1.columns[0] == "N");
    CHECK(t1.columns[8] == "seed");
    CHECK(t1.columns[9] == "version");
    REQUIRE(t1.rows.size() == 6);
    // ascending N then ascending c
    CHECK(std::get<long long>(t1.rows[0][0]) == 10000);
    CHECK(std::get<long long>(t1.rows[3][0]) == 1000000);
    CHECK(std::get<double>(t1.rows[0][1]) < std::get<double>(t1.rows[1][1]));

    // JSON form parses and carries the version stamp
    const auto text = io::to_json_text(t1);
    const auto parsed = io::json::parse(text);
    REQUIRE(parsed.is_array());
    CHECK(parsed.size() == 6);
    CHECK(parsed[0]["version"] == kVersion);
    CHECK(parsed[0]["seed"] == 42);
}

TEST_CASE("winprob experiment emits one row per equilibrium and method") {
    ExperimentConfig cfg;
    cfg.command = Command::WinProb;
    cfg.issue = presets::example1();
    cfg.populations = {2000};
    cfg.methods = {"normal", "exact"};
    const auto t = run_experiment(cfg);
    CHECK(t.rows.size() == 6);  // 3 equilibria x 2 methods
    for (const auto& row : t.rows) {
        const double v = std::get<double>(row[4]);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("invert experiment reproduces the closed-form series") {
    ExperimentConfig cfg;
    cfg.command = Command::Invert;
    cfg.issue = presets::example1();
    cfg.costs = {1.0, 0.8};
    const auto t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK(std::get<double>(t.rows[0][3]) == Catch::Approx(140.625).margin(1e-9));
    CHECK(std::get<double>(t.rows[1][3]) == Catch::Approx(25.0).margin(1e-9));
}

TEST_CASE("limit experiment") {
    ExperimentConfig cfg;
    cfg.command = Command::Limit;
    cfg.alphas = {0.75, 1.0, 1.25};
    cfg.beta = 0.5;
    cfg.c_star = 0.6;
    const auto t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 3);
    CHECK(std::get<std::string>(t.rows[0][3]) == "strong-non-jury");
    CHECK(std::get<double>(t.rows[1][4]) == Catch::Approx(0.9522).margin(1e-4));
    CHECK(std::get<std::string>(t.rows[2][3]) == "jury");
}

TEST_CASE("mechanism experiment with simulation columns") {
    ExperimentConfig cfg;
    cfg.command = Command::Mechanism;
    cfg.epsilon = 0.2;
    cfg.gammas = {0.5};
    cfg.simulate = true;
    cfg.reps = 2000;
    const auto t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 1);
    REQUIRE(t.columns.size() == 15);
    CHECK(t.columns[9] == "freq_A");
    const double pa_total = std::get<double>(t.rows[0][7]);
    const double freq_a = std::get<double>(t.rows[0][9]);
    CHECK(std::abs(pa_total - freq_a) < 0.05);
}

TEST_CASE("config validation produces actionable errors") {
    ExperimentConfig cfg;
    cfg.command = Command::Equilibria;
    cfg.issue = presets::example1();
    CHECK_THROWS_WITH(run_experiment(cfg), Catch::Matchers::ContainsSubstring("--N"));

    cfg.command = Command::SweepAlpha;
    cfg.populations = {1000, 2000};
    CHECK_THROWS_WITH(run_experiment(cfg),
                      Catch::Matchers::ContainsSubstring("exactly one --N"));

    cfg.command = Command::Limit;
    cfg.alphas = {1.0};
    cfg.c_star = 0.0;
    CHECK_THROWS_WITH(run_experiment(cfg), Catch::Matchers::ContainsSubstring("--c-star"));

    ExperimentConfig file_cfg;
    file_cfg.command = Command::Equilibria;
    file_cfg.populations = {100};
    CHECK_THROWS_WITH(run_experiment(file_cfg), Catch::Matchers::ContainsSubstring("--issue"));
}

TEST_CASE("bundled presets are present and valid") {
    const auto presets_list = bundled_examples();
    const auto has = [&](const std::string& name) {
        for (const auto& [n, c] : presets_list)
            if (n == name) return true;
        return false;
    };
    CHECK(has("example1-winprob-vs-N"));
    CHECK(has("example1-alpha-sweep"));
    CHECK(has("example1-equilibria"));
    CHECK(has("example1-population-for-cost"));

    for (const auto& [name, preset] : presets_list) {
        if (name == "example1-winprob-vs-N" || name == "example1-alpha-sweep") continue;  // heavy
        const auto t = run_experiment(preset);
        CHECK(!t.rows.empty());
    }
}

TEST_CASE("csv writer formats floats with nine significant digits") {
    CHECK(io::format_double(0.6) == "0.6");
    CHECK(io::format_double(1.0 / 3.0) == "0.333333333");
    CHECK(io::format_double(140.625) == "140.625");
    CHECK(io::format_double(25.0) == "25");
    CHECK(io::format_double(1e-12) == "1e-12");
}

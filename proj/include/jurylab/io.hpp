// Config loading (issue + pivotality-model JSON) and deterministic result
// serialization to CSV or JSON.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "jurylab/support.hpp"

namespace jurylab::io {

using json = nlohmann::ordered_json;

/// PPM config: {"kind": "binomial"|"poisson"|"sampling"|"polynomial",
///              "k"?: int, "q"?: real, "alpha"?: real, "beta"?: real}
inline PivotalityModel parse_ppm(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("ppm config: expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    PivotalityModel model;
    if (kind == "binomial") {
        model = BinomialPpm{};
    } else if (kind == "poisson") {
        model = PoissonPpm{};
    } else if (kind == "sampling") {
        SamplingPpm s;
        s.k = j.value("k", static_cast<long long>(1));
        model = s;
    } else if (kind == "polynomial") {
        PolynomialPpm p;
        p.q = j.value("q", 1.0);
        p.alpha = j.value("alpha", 1.0);
        p.beta = j.value("beta", 0.5);
        model = p;
    } else {
        throw std::invalid_argument("ppm config: unknown kind \"" + kind + "\"");
    }
    validate(model);
    return model;
}

inline json ppm_to_json(const PivotalityModel& model) {
    json j;
    j["kind"] = ppm_name(model);
    if (const auto* s = std::get_if<SamplingPpm>(&model)) {
        j["k"] = s->k;
    } else if (const auto* p = std::get_if<PolynomialPpm>(&model)) {
        j["q"] = p->q;
        j["alpha"] = p->alpha;
        j["beta"] = p->beta;
    }
    return j;
}

inline SupportFunction parse_support(const json& j, const std::string& name) {
    if (!j.is_array())
        throw std::invalid_argument("issue config: \"" + name + "\" must be an array of [c, s]");
    std::vector<SupportFunction::Point> pts;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("issue config: \"" + name + "\" breakpoint " +
                                        std::to_string(pts.size()) + " is not a [c, s] pair");
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    try {
        return SupportFunction::from_points(std::move(pts));
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument("issue config: \"" + name + "\": " + err.what());
    }
}

/// Issue config: {"s_A": [[c,s],...], "s_B": [[c,s],...], "ppm": {...}}
inline Issue parse_issue(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("issue config: expected a JSON object");
    for (const char* field : {"s_A", "s_B", "ppm"})
        if (!j.contains(field))
            throw std::invalid_argument(std::string("issue config: missing \"") + field + "\"");
    return Issue::make(parse_support(j.at("s_A"), "s_A"), parse_support(j.at("s_B"), "s_B"),
                       parse_ppm(j.at("ppm")));
}

inline Issue load_issue(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open issue file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw std::runtime_error("issue file " + path + " is not valid JSON: " + err.what());
    }
    return parse_issue(j);
}

inline json issue_to_json(const Issue& issue) {
    json j;
    auto pts = [](const SupportFunction& s) {
        json arr = json::array();
        for (const auto& [c, m] : s.points()) arr.push_back(json::array({c, m}));
        return arr;
    };
    j["s_A"] = pts(issue.s_a);
    j["s_B"] = pts(issue.s_b);
    j["ppm"] = ppm_to_json(issue.ppm);
    return j;
}

/// All floating-point output is printed with 9 significant digits.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

using Cell = std::variant<long long, double, std::string>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::logic_error("result table: row width disagrees with header");
        rows.push_back(std::move(row));
    }
};

inline std::string cell_text(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
}

inline std::string to_csv(const ResultTable& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << cell_text(row[i]);
        out << "\n";
    }
    return out.str();
}

inline std::string to_json_text(const ResultTable& t) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            if (std::holds_alternative<long long>(c)) {
                obj[t.columns[i]] = std::get<long long>(c);
            } else if (std::holds_alternative<double>(c)) {
                // serialize through the fixed 9-significant-digit form so JSON
                // and CSV outputs agree byte-for-byte on values
                obj[t.columns[i]] = json::parse(format_double(std::get<double>(c)));
            } else {
                obj[t.columns[i]] = std::get<std::string>(c);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

inline void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

}  // namespace jurylab::io

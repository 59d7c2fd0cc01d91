#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/core/results.hpp"
#include "sgmimo/geometry/network.hpp"
#include "sgmimo/io/config.hpp"
#include "sgmimo/mc/validation.hpp"

#ifndef SGMIMO_VERSION
#define SGMIMO_VERSION "0.1.0-unknown"
#endif

namespace sgmimo {

inline constexpr const char* kVersion = SGMIMO_VERSION;

/// Raised when an output file cannot be written or read.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rectangular numeric result plus the metadata every output carries.
struct ResultTable {
    std::string kind; ///< coverage, rate, sweep, validation, distance-laws
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    json params = json::object(); ///< effective parameter snapshot
    std::string method;
    std::uint64_t seed = 0;
    json meta = json::object();

    std::vector<double> column(const std::string& name) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) {
                std::vector<double> out;
                for (const auto& r : rows) out.push_back(r[c]);
                return out;
            }
        throw DomainError("result table has no column '" + name + "'");
    }
};

/// 12 significant digits, decimal point regardless of locale.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(12);
    os << v;
    return os.str();
}

inline void write_csv(const ResultTable& t, std::ostream& os) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << "\r\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_number(r[c]);
        os << "\r\n";
    }
}

/// JSON numbers cannot be infinite; those cells become strings.
inline json cell_to_json(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

inline double cell_from_json(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    throw IoError("unexpected cell value in result document");
}

inline json metadata_json(const ResultTable& t) {
    return json{{"version", kVersion}, {"kind", t.kind},   {"method", t.method},
                {"seed", t.seed},      {"params", t.params}, {"meta", t.meta}};
}

inline json to_json(const ResultTable& t) {
    json j = metadata_json(t);
    j["columns"] = t.columns;
    json data = json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        json col = json::array();
        for (const auto& r : t.rows) col.push_back(cell_to_json(r[c]));
        data[t.columns[c]] = std::move(col);
    }
    j["data"] = std::move(data);
    return j;
}

inline ResultTable table_from_json(const json& j) {
    ResultTable t;
    try {
        t.kind = j.at("kind").get<std::string>();
        t.method = j.at("method").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.params = j.at("params");
        t.meta = j.at("meta");
        t.columns = j.at("columns").get<std::vector<std::string>>();
        const json& data = j.at("data");
        const std::size_t n = t.columns.empty() ? 0 : data.at(t.columns[0]).size();
        t.rows.assign(n, std::vector<double>(t.columns.size()));
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            const json& col = data.at(t.columns[c]);
            if (col.size() != n) throw IoError("ragged columns in result document");
            for (std::size_t i = 0; i < n; ++i) t.rows[i][c] = cell_from_json(col[i]);
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed result document: ") + e.what());
    }
    return t;
}

inline std::string render(const ResultTable& t, OutputFormat format) {
    std::ostringstream os;
    if (format == OutputFormat::csv)
        write_csv(t, os);
    else
        os << to_json(t).dump(2) << "\n";
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

/// Writes to `path` ("-" is stdout). A CSV written to a file gets a sidecar
/// `<path>.meta.json` with the parameter snapshot, since the CSV itself only
/// carries the header and data rows.
inline void write_results(const ResultTable& t, const std::string& path, OutputFormat format) {
    const std::string text = render(t, format);
    if (path == "-" || path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    write_text_file(path, text);
    if (format == OutputFormat::csv) write_text_file(path + ".meta.json", metadata_json(t).dump(2) + "\n");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading: " + std::strerror(errno));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ResultTable parse_csv(const std::string& text) {
    ResultTable t;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (header) {
            t.columns = cells;
            header = false;
            continue;
        }
        if (cells.size() != t.columns.size()) throw IoError("CSV row has " + std::to_string(cells.size()) + " cells");
        std::vector<double> row;
        for (const auto& c : cells) {
            if (c == "inf") row.push_back(INFINITY);
            else if (c == "-inf") row.push_back(-INFINITY);
            else if (c == "nan") row.push_back(NAN);
            else {
                try {
                    row.push_back(std::stod(c));
                } catch (const std::exception&) {
                    throw IoError("non-numeric CSV cell '" + c + "'");
                }
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Reads a file produced by write_results (JSON, or CSV plus its sidecar if present).
inline ResultTable read_results(const std::string& path, OutputFormat format) {
    const std::string text = read_text_file(path);
    if (format == OutputFormat::json) {
        try {
            return table_from_json(json::parse(text));
        } catch (const json::parse_error& e) {
            throw IoError("'" + path + "' is not valid JSON: " + e.what());
        }
    }
    ResultTable t = parse_csv(text);
    std::ifstream side(path + ".meta.json");
    if (side) {
        const json m = json::parse(side);
        t.kind = m.value("kind", "");
        t.method = m.value("method", "");
        t.seed = m.value("seed", std::uint64_t{0});
        t.params = m.value("params", json::object());
        t.meta = m.value("meta", json::object());
    }
    return t;
}

// Conversions from engine results.

inline ResultTable coverage_table(const CoverageCurve& c) {
    ResultTable t;
    t.kind = "coverage";
    t.method = std::string(to_string(c.method));
    t.seed = c.seed;
    t.params = params_to_json(c.params);
    t.meta = {{"variant", std::string(c.variant)},
              {"n_gamma", c.n_gamma},
              {"samples", c.samples},
              {"clamp_events", c.clamp_events},
              {"max_clamp", c.max_clamp}};
    const bool mc = c.method == Method::monte_carlo;
    t.columns = {"threshold_db", "coverage"};
    if (mc) t.columns.push_back("ci_half_width");
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
        std::vector<double> row{linear_to_db(c.thresholds[i]), c.coverage[i]};
        if (mc) row.push_back(c.ci_half_width[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline ResultTable rate_table(const RateResult& r) {
    ResultTable t;
    t.kind = "rate";
    t.method = std::string(to_string(r.method));
    t.seed = r.seed;
    t.params = params_to_json(r.params);
    t.meta = {{"n_gamma", r.n_gamma}, {"samples", r.samples}};
    t.columns = {"rate"};
    if (r.method == Method::monte_carlo) t.columns.push_back("ci_half_width");
    t.rows.push_back({r.rate});
    if (r.method == Method::monte_carlo) t.rows.back().push_back(r.ci_half_width);
    return t;
}

inline ResultTable validation_table(const ValidationReport& v) {
    ResultTable t;
    t.kind = "validation";
    t.method = "analytic-vs-monte-carlo";
    t.seed = v.mc_curve.seed;
    t.params = params_to_json(v.analytic_curve.params);
    t.meta = {{"worst_deviation", v.worst},
              {"gate", v.gate},
              {"pass", v.pass},
              {"samples", v.mc_curve.samples},
              {"clamp_events", v.analytic_curve.clamp_events}};
    t.columns = {"threshold_db", "analytic", "monte_carlo", "ci_half_width", "deviation"};
    for (std::size_t i = 0; i < v.thresholds.size(); ++i)
        t.rows.push_back({linear_to_db(v.thresholds[i]), v.analytic[i], v.monte_carlo[i], v.half_width[i],
                          v.deviation[i]});
    return t;
}

/// Coordinates and associations of one realization, for external plotting.
inline json realization_to_json(const NetworkRealization& net) {
    json bs = json::array(), users = json::array(), cells = json::array();
    for (std::size_t c = 0; c < net.n_cells(); ++c) {
        bs.push_back({net.bs(c).x, net.bs(c).y});
        for (const auto& u : net.users[c]) users.push_back({{"x", u.x}, {"y", u.y}, {"cell", c}});
        json poly = json::array();
        for (const auto& v : net.cells[c]) poly.push_back({v.x, v.y});
        cells.push_back({{"polygon", poly}, {"complete", static_cast<bool>(net.complete[c])}});
    }
    const Window& w = net.base_stations.window;
    return json{{"version", kVersion},
                {"window_km", w.side},
                {"base_stations", bs},
                {"users", users},
                {"cells", cells}};
}

} // namespace sgmimo

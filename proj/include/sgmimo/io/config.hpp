#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgmimo/analytic/coverage.hpp"
#include "sgmimo/core/errors.hpp"
#include "sgmimo/core/params.hpp"
#include "sgmimo/mc/simulator.hpp"

namespace sgmimo {

using json = nlohmann::json;

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}
inline std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

/// Grid "a:b:step" in dB, inclusive of b (within a small tolerance).
inline std::vector<double> parse_db_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("threshold grid '" + spec + "' is not of the form a:b:step");
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw ConfigError("threshold grid '" + spec + "' is not of the form a:b:step with step > 0 and a <= b");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
}

inline std::vector<double> db_to_linear(const std::vector<double>& db) {
    std::vector<double> out;
    out.reserve(db.size());
    for (double v : db) out.push_back(db_to_linear(v));
    return out;
}

/// Everything a CLI run needs. Powers and path loss are kept in linear
/// units; JSON uses dBm/dB.
struct RunConfig {
    SystemParams params = table_one(Mode::asynchronous, 64, 0.5);
    double z = 2.0;
    std::vector<double> thresholds_db = parse_db_grid("-10:20:1");
    McConfig mc{};
    AnalyticOptions analytic{};
    std::string output = "-";
    OutputFormat format = OutputFormat::csv;

    std::vector<double> thresholds() const { return db_to_linear(thresholds_db); }
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("unknown configuration key '" + where + it.key() + "'");
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("configuration key '" + where + key + "' has the wrong type");
    }
}

// Reads a quantity given either in log units (`log_key`) or linear units
// (`lin_key`), but not both.
inline std::optional<double> either(const json& j, const char* log_key, const char* lin_key, double (*from_log)(double),
                                    const std::string& where) {
    const bool has_log = j.contains(log_key), has_lin = j.contains(lin_key);
    if (has_log && has_lin)
        throw ConfigError(std::string("give only one of '") + log_key + "' and '" + lin_key + "'");
    if (has_log) return from_log(get_as<double>(j, log_key, where));
    if (has_lin) return get_as<double>(j, lin_key, where);
    return std::nullopt;
}

inline double attenuation_from_db(double db) { return attenuation_db_to_linear(db); }

} // namespace detail

/// Overlays the keys present in `j` onto `cfg`. Unknown keys are rejected.
inline void apply_config(RunConfig& cfg, const json& j) {
    using detail::get_as;
    detail::reject_unknown(j,
                           {"mode", "p_d_dbm", "p_d_w", "p_u_dbm", "p_u_w", "noise_dbm", "noise_w", "path_loss_db",
                            "omega", "alpha", "m", "n_tot", "n_p", "z", "eps", "r_e_km", "lambda_per_km2", "r0_km",
                            "n_gamma", "thresholds_db", "monte_carlo", "quadrature", "output", "format"},
                           "");
    SystemParams& p = cfg.params;
    if (j.contains("mode")) p.mode = parse_mode(get_as<std::string>(j, "mode", ""));
    if (auto v = detail::either(j, "p_d_dbm", "p_d_w", dbm_to_watts, "")) p.p_d = *v;
    if (auto v = detail::either(j, "p_u_dbm", "p_u_w", dbm_to_watts, "")) p.p_u = *v;
    if (auto v = detail::either(j, "noise_dbm", "noise_w", dbm_to_watts, "")) p.sigma2 = *v;
    if (auto v = detail::either(j, "path_loss_db", "omega", detail::attenuation_from_db, "")) p.omega = *v;
    if (j.contains("alpha")) p.alpha = get_as<double>(j, "alpha", "");
    if (j.contains("m")) p.m = get_as<int>(j, "m", "");
    if (j.contains("eps")) p.eps = get_as<double>(j, "eps", "");
    if (j.contains("r0_km")) p.r0 = get_as<double>(j, "r0_km", "");
    if (j.contains("n_gamma")) p.n_gamma = get_as<int>(j, "n_gamma", "");
    // Both may be given if they agree; validate() checks R_e = (pi lambda)^(-1/2).
    if (j.contains("r_e_km") && j.contains("lambda_per_km2")) {
        p.r_e = get_as<double>(j, "r_e_km", "");
        p.lambda = get_as<double>(j, "lambda_per_km2", "");
    } else if (j.contains("r_e_km")) {
        p.with_exclusion_radius(get_as<double>(j, "r_e_km", ""));
    } else if (j.contains("lambda_per_km2")) {
        p.with_density(get_as<double>(j, "lambda_per_km2", ""));
    }
    if (j.contains("n_tot") || j.contains("n_p") || j.contains("z")) {
        const int n_tot = j.contains("n_tot") ? get_as<int>(j, "n_tot", "") : p.frame.n_tot;
        const int n_p = j.contains("n_p") ? get_as<int>(j, "n_p", "") : p.frame.n_p;
        if (j.contains("z")) cfg.z = get_as<double>(j, "z", "");
        p.frame = derive_frame(n_tot, n_p, cfg.z);
    }
    if (j.contains("thresholds_db")) {
        const json& t = j.at("thresholds_db");
        if (t.is_string())
            cfg.thresholds_db = parse_db_grid(t.get<std::string>());
        else
            cfg.thresholds_db = get_as<std::vector<double>>(j, "thresholds_db", "");
    }
    if (j.contains("monte_carlo")) {
        const json& m = j.at("monte_carlo");
        const std::string w = "monte_carlo.";
        detail::reject_unknown(m, {"trials", "seed", "window_km", "margin_km", "users_per_trial_cap", "weighting", "threads"},
                               w);
        if (m.contains("trials")) cfg.mc.trials = get_as<int>(m, "trials", w);
        if (m.contains("seed")) cfg.mc.seed = get_as<std::uint64_t>(m, "seed", w);
        if (m.contains("window_km")) cfg.mc.window_side = get_as<double>(m, "window_km", w);
        if (m.contains("margin_km")) cfg.mc.margin = get_as<double>(m, "margin_km", w);
        if (m.contains("users_per_trial_cap")) cfg.mc.users_per_trial_cap = get_as<int>(m, "users_per_trial_cap", w);
        if (m.contains("weighting")) cfg.mc.weighting = parse_weighting(get_as<std::string>(m, "weighting", w));
        if (m.contains("threads")) cfg.mc.threads = get_as<unsigned>(m, "threads", w);
    }
    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        const std::string w = "quadrature.";
        detail::reject_unknown(q, {"rel_tol", "abs_tol", "max_subdivisions", "truncation_mass", "tabulate_e2", "exact_q3"},
                               w);
        auto& qc = cfg.analytic.quad;
        if (q.contains("rel_tol")) qc.rel_tol = get_as<double>(q, "rel_tol", w);
        if (q.contains("abs_tol")) qc.abs_tol = get_as<double>(q, "abs_tol", w);
        if (q.contains("max_subdivisions")) qc.max_subdivisions = get_as<int>(q, "max_subdivisions", w);
        if (q.contains("truncation_mass")) qc.truncation_mass = get_as<double>(q, "truncation_mass", w);
        if (q.contains("tabulate_e2")) cfg.analytic.tabulate_e2 = get_as<bool>(q, "tabulate_e2", w);
        if (q.contains("exact_q3")) cfg.analytic.exact_q3 = get_as<bool>(q, "exact_q3", w);
    }
    if (j.contains("output")) cfg.output = get_as<std::string>(j, "output", "");
    if (j.contains("format")) cfg.format = parse_format(get_as<std::string>(j, "format", ""));
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("configuration file '" + path + "' is not valid JSON: " + e.what());
    }
    RunConfig cfg;
    apply_config(cfg, j);
    return cfg;
}

/// Effective system parameters in human units (the JSON snapshot embedded in outputs).
inline json params_to_json(const SystemParams& p) {
    return json{{"mode", std::string(to_string(p.mode))},
                {"p_d_dbm", watts_to_dbm(p.p_d)},
                {"p_u_dbm", watts_to_dbm(p.p_u)},
                {"noise_dbm", watts_to_dbm(p.sigma2)},
                {"path_loss_db", linear_to_attenuation_db(p.omega)},
                {"alpha", p.alpha},
                {"m", p.m},
                {"n_tot", p.frame.n_tot},
                {"n_p", p.frame.n_p},
                {"n_u", p.frame.n_u},
                {"n_d", p.frame.n_d},
                {"eps", p.eps},
                {"r_e_km", p.r_e},
                {"lambda_per_km2", p.lambda},
                {"r0_km", p.r0},
                {"n_gamma", p.gamma_shape()}};
}

inline json config_to_json(const RunConfig& c) {
    json j = params_to_json(c.params);
    j.erase("n_u");
    j.erase("n_d");
    j.erase("lambda_per_km2");
    j["z"] = c.z;
    j["n_gamma"] = c.params.n_gamma;
    j["thresholds_db"] = c.thresholds_db;
    j["monte_carlo"] = {{"trials", c.mc.trials},
                        {"seed", c.mc.seed},
                        {"window_km", c.mc.window_side},
                        {"margin_km", c.mc.margin},
                        {"users_per_trial_cap", c.mc.users_per_trial_cap},
                        {"weighting", std::string(to_string(c.mc.weighting))}};
    j["quadrature"] = {{"rel_tol", c.analytic.quad.rel_tol},
                       {"abs_tol", c.analytic.quad.abs_tol},
                       {"max_subdivisions", c.analytic.quad.max_subdivisions},
                       {"truncation_mass", c.analytic.quad.truncation_mass},
                       {"tabulate_e2", c.analytic.tabulate_e2},
                       {"exact_q3", c.analytic.exact_q3}};
    j["output"] = c.output;
    j["format"] = std::string(to_string(c.format));
    return j;
}

} // namespace sgmimo

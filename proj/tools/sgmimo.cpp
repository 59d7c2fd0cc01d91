// Command-line front end: coverage and rate curves, Monte Carlo runs,
// validation against simulation, and the distance-law checks.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgmimo/analytic/coverage.hpp"
#include "sgmimo/geometry/distance_check.hpp"
#include "sgmimo/io/config.hpp"
#include "sgmimo/io/results.hpp"
#include "sgmimo/mc/simulator.hpp"
#include "sgmimo/mc/validation.hpp"

using namespace sgmimo;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kGate = 4 };

/// Flag values; only the ones given on the command line are applied, on
/// top of the --config file.
struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> mode;
    std::optional<int> m, n_gamma, n_p, n_tot;
    std::optional<double> eps, z, alpha, r0, r_e;
    std::optional<std::string> thresholds_db;
    std::optional<std::string> output, format;
    std::optional<double> rel_tol;
    bool exact_q3 = false, no_tabulate = false;
    std::optional<int> trials, users_cap;
    std::optional<std::uint64_t> seed;
    std::optional<double> window, margin;
    std::optional<std::string> weighting;
    std::optional<unsigned> threads;
    bool progress = false;

    json overrides() const {
        json j = json::object();
        if (mode) j["mode"] = *mode;
        if (m) j["m"] = *m;
        if (n_gamma) j["n_gamma"] = *n_gamma;
        if (n_p) j["n_p"] = *n_p;
        if (n_tot) j["n_tot"] = *n_tot;
        if (eps) j["eps"] = *eps;
        if (z) j["z"] = *z;
        if (alpha) j["alpha"] = *alpha;
        if (r0) j["r0_km"] = *r0;
        if (r_e) j["r_e_km"] = *r_e;
        if (thresholds_db) j["thresholds_db"] = *thresholds_db;
        if (output) j["output"] = *output;
        if (format) j["format"] = *format;
        json q = json::object();
        if (rel_tol) q["rel_tol"] = *rel_tol;
        if (exact_q3) q["exact_q3"] = true;
        if (no_tabulate) q["tabulate_e2"] = false;
        if (!q.empty()) j["quadrature"] = q;
        json mc = json::object();
        if (trials) mc["trials"] = *trials;
        if (seed) mc["seed"] = *seed;
        if (window) mc["window_km"] = *window;
        if (margin) mc["margin_km"] = *margin;
        if (weighting) mc["weighting"] = *weighting;
        if (users_cap) mc["users_per_trial_cap"] = *users_cap;
        if (threads) mc["threads"] = *threads;
        if (!mc.empty()) j["monte_carlo"] = mc;
        return j;
    }

    RunConfig resolve() const {
        RunConfig cfg = config ? load_config(*config) : RunConfig{};
        apply_config(cfg, overrides());
        cfg.params.validate();
        cfg.mc.thresholds = cfg.thresholds();
        cfg.mc.progress = progress;
        cfg.mc.validate();
        cfg.analytic.threads = static_cast<int>(cfg.mc.threads);
        cfg.analytic.quad.validate();
        return cfg;
    }
};

void add_model_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON run configuration; flags override it");
    app->add_option("--mode", f.mode, "sync or async");
    app->add_option("--m", f.m, "antennas per base station");
    app->add_option("--eps", f.eps, "power-control fraction in [0, 1]");
    app->add_option("--n-gamma", f.n_gamma, "terms of the gamma approximation");
    app->add_option("--n-p", f.n_p, "pilot symbols (= users per cell)");
    app->add_option("--n-tot", f.n_tot, "coherence block length in symbols");
    app->add_option("--z", f.z, "downlink/uplink symbol ratio");
    app->add_option("--alpha", f.alpha, "path-loss exponent");
    app->add_option("--r0", f.r0, "minimum user distance [km]");
    app->add_option("--r-e", f.r_e, "exclusion radius [km]; sets the BS density");
    app->add_option("--thresholds-db", f.thresholds_db, "SINR grid a:b:step in dB (or a single value)");
    app->add_option("-o,--output", f.output, "output path, - for stdout");
    app->add_option("--format", f.format, "csv or json");
    app->add_option("--rel-tol", f.rel_tol, "relative quadrature tolerance");
    app->add_flag("--exact-q3", f.exact_q3, "use the exact co-pilot distance in Q3");
    app->add_flag("--no-tabulate", f.no_tabulate, "evaluate E2 by nested quadrature");
    app->add_option("--threads", f.threads, "worker threads");
}

void add_mc_flags(CLI::App* app, Flags& f) {
    app->add_option("--trials", f.trials, "network realizations");
    app->add_option("--seed", f.seed, "master seed");
    app->add_option("--window", f.window, "simulation window side [km]");
    app->add_option("--margin", f.margin, "border excluded from measurement [km]");
    app->add_option("--weighting", f.weighting, "per-user or cell-area");
    app->add_option("--users-cap", f.users_cap, "max tagged users per trial (0 = all)");
    app->add_flag("--progress", f.progress, "report progress on stderr");
}

void emit(const ResultTable& t, const RunConfig& cfg) {
    ResultTable out = t;
    out.meta["config"] = config_to_json(cfg);
    write_results(out, cfg.output, cfg.format);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

int run_sweep(const RunConfig& cfg, const std::string& param, const std::string& values, bool use_mc) {
    ResultTable t;
    t.kind = "sweep";
    t.method = use_mc ? "monte-carlo" : "analytic";
    t.seed = use_mc ? cfg.mc.seed : 0;
    t.params = params_to_json(cfg.params);
    t.columns = {param == "np" ? "n_p" : "eps", "rate"};
    if (use_mc) t.columns.push_back("ci_half_width");
    std::size_t best = 0;
    for (const auto& v : split_list(values)) {
        SystemParams p = cfg.params;
        double x = 0.0;
        try {
            x = std::stod(v);
        } catch (const std::exception&) {
            throw ConfigError("sweep value '" + v + "' is not a number");
        }
        if (param == "np") {
            if (x != std::floor(x)) throw ConfigError("pilot counts must be whole numbers");
            // Keeps N_tot and the downlink/uplink ratio; shares may be fractional.
            p.frame = derive_frame_shares(p.frame.n_tot, static_cast<int>(x), cfg.z);
        } else {
            p.eps = x;
        }
        p.validate();
        const RateResult r = use_mc ? run_rate_mc(p, cfg.mc) : AnalyticEngine(p, cfg.analytic).ergodic_rate();
        t.rows.push_back({x, r.rate});
        if (use_mc) t.rows.back().push_back(r.ci_half_width);
        if (r.rate > t.rows[best][1]) best = t.rows.size() - 1;
    }
    t.meta = {{"param", param}, {"argmax", t.rows[best][0]}, {"max_rate", t.rows[best][1]}};
    emit(t, cfg);
    return kOk;
}

int run_pdf_check(const RunConfig& cfg, std::size_t samples, double gate) {
    DistanceCheckConfig dc;
    dc.samples = samples;
    dc.seed = cfg.mc.seed;
    const auto start = std::chrono::steady_clock::now();
    const auto checks = check_distance_laws(cfg.params, dc);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ResultTable t;
    t.kind = "distance-laws";
    t.method = "geometric-sampling";
    t.seed = dc.seed;
    t.params = params_to_json(cfg.params);
    t.columns = {"law", "samples", "ks", "gate", "pass"};
    json laws = json::array();
    bool ok = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const bool pass = checks[i].ks < gate;
        ok = ok && pass;
        laws.push_back(checks[i].law);
        t.rows.push_back({static_cast<double>(i + 1), static_cast<double>(checks[i].samples), checks[i].ks, gate,
                          pass ? 1.0 : 0.0});
    }
    t.meta = {{"laws", laws}, {"window_km", dc.window_side}, {"margin_km", dc.margin}, {"seconds", seconds}};
    emit(t, cfg);
    return ok ? kOk : kGate;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage and rate of massive MIMO cellular networks under pilot contamination"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.failure_message([](const CLI::App*, const CLI::Error& e) { return std::string("sgmimo: ") + e.what() + "\n"; });

    Flags f;
    auto* coverage_cmd = app.add_subcommand("coverage", "analytic coverage probability");
    auto* coverage_mc_cmd = app.add_subcommand("coverage-mc", "Monte Carlo coverage probability");
    auto* rate_cmd = app.add_subcommand("rate", "analytic ergodic rate per cell");
    auto* rate_mc_cmd = app.add_subcommand("rate-mc", "Monte Carlo ergodic rate per cell");
    auto* sweep_cmd = app.add_subcommand("sweep", "rate against N_p or eps");
    auto* validate_cmd = app.add_subcommand("validate", "analytic coverage against Monte Carlo");
    auto* special_cmd = app.add_subcommand("special", "closed special cases of the coverage");
    auto* pdf_cmd = app.add_subcommand("pdf-check", "distance laws against geometric sampling");
    auto* dump_cmd = app.add_subcommand("realization", "dump one network realization as JSON");

    for (auto* c : {coverage_cmd, coverage_mc_cmd, rate_cmd, rate_mc_cmd, sweep_cmd, validate_cmd, special_cmd, pdf_cmd,
                    dump_cmd})
        add_model_flags(c, f);
    for (auto* c : {coverage_mc_cmd, rate_mc_cmd, sweep_cmd, validate_cmd, pdf_cmd, dump_cmd}) add_mc_flags(c, f);

    std::string sweep_param, sweep_values;
    bool sweep_mc = false;
    sweep_cmd->add_option("--param", sweep_param, "np or eps")->required()->check(CLI::IsMember({"np", "eps"}));
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_flag("--mc", sweep_mc, "estimate each rate by Monte Carlo");

    double gate = 0.05;
    validate_cmd->add_option("--gate", gate, "largest allowed absolute coverage deviation");

    std::string special_case;
    special_cmd->add_option("--case", special_case, "full-pc, infinite-m or no-pc")
        ->required()
        ->check(CLI::IsMember({"full-pc", "infinite-m", "no-pc"}));

    std::size_t pdf_samples = 100000;
    double pdf_gate = 0.02;
    pdf_cmd->add_option("--samples", pdf_samples, "samples per law");
    pdf_cmd->add_option("--gate", pdf_gate, "largest allowed KS distance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        const RunConfig cfg = f.resolve();
        const auto thresholds = cfg.thresholds();
        if (*coverage_cmd) {
            emit(coverage_table(AnalyticEngine(cfg.params, cfg.analytic).coverage(thresholds)), cfg);
        } else if (*coverage_mc_cmd) {
            emit(coverage_table(run_coverage_mc(cfg.params, cfg.mc)), cfg);
        } else if (*rate_cmd) {
            emit(rate_table(AnalyticEngine(cfg.params, cfg.analytic).ergodic_rate()), cfg);
        } else if (*rate_mc_cmd) {
            emit(rate_table(run_rate_mc(cfg.params, cfg.mc)), cfg);
        } else if (*sweep_cmd) {
            return run_sweep(cfg, sweep_param, sweep_values, sweep_mc);
        } else if (*validate_cmd) {
            const ValidationReport r = validate(cfg.params, cfg.mc, gate, cfg.analytic);
            emit(validation_table(r), cfg);
            std::fprintf(stderr, "validate: worst deviation %.4f, gate %.4f: %s\n", r.worst, r.gate,
                         r.pass ? "pass" : "FAIL");
            return r.pass ? kOk : kGate;
        } else if (*special_cmd) {
            CoverageCurve c;
            if (special_case == "full-pc") c = coverage_fullpc_async(thresholds, cfg.params, cfg.analytic);
            else if (special_case == "infinite-m") c = coverage_infinite_m(thresholds, cfg.params, cfg.analytic);
            else c = coverage_no_pc(thresholds, cfg.params, cfg.analytic);
            emit(coverage_table(c), cfg);
        } else if (*pdf_cmd) {
            return run_pdf_check(cfg, pdf_samples, pdf_gate);
        } else if (*dump_cmd) {
            Rng rng(cfg.mc.seed);
            const auto net = build_network(cfg.params, Window{cfg.mc.window_side}, rng);
            json j = realization_to_json(net);
            j["params"] = params_to_json(cfg.params);
            j["seed"] = cfg.mc.seed;
            const std::string text = j.dump(2) + "\n";
            if (cfg.output == "-") std::cout << text;
            else write_text_file(cfg.output, text);
        }
        return kOk;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "sgmimo: configuration error: %s\n", e.what());
        return kConfig;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "sgmimo: invalid parameters: %s\n", e.what());
        return kConfig;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "sgmimo: numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const EstimationError& e) {
        std::fprintf(stderr, "sgmimo: numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sgmimo: %s\n", e.what());
        return kFailure;
    }
}

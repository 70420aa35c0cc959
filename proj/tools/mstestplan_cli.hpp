#pragma once

// mstestplan command-line front end. `run` is kept separate from main() so
// tests can drive every subcommand in-process and compare outputs.
//
// Exit codes: 0 success, 1 input diagnostics or usage errors, 2 infeasible.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mstestplan/mstestplan.hpp"

namespace mstestplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitInfeasible = 2;

struct GlobalOptions {
    double p = kDefaultRoutingP;
    std::string mode = "full";
    std::uint64_t seed = 0;  // reserved; every algorithm is deterministic
    std::string format = "csv";
    std::string manifest_path;
    double budget = std::numeric_limits<double>::infinity();
    bool no_symmetry = false;
    double width_slack = 0.05;
    bool exact = false;
};

struct InputFiles {
    std::string digital;
    std::string analog;
};

class DiagnosticsError : public Error {
public:
    using Error::Error;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DiagnosticsError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    Soc soc;
    RunManifest manifest;
    std::vector<ParseDiagnostic> diagnostics;
};

inline Loaded load(const InputFiles& files, const GlobalOptions& g, std::ostream& err, bool show_warnings = false) {
    Loaded L;
    L.soc.routing_p = g.p;
    bool failed = false;
    auto report = [&](const std::vector<ParseDiagnostic>& ds) {
        for (const auto& d : ds) {
            if (d.severity == Severity::error || show_warnings) err << to_string(d) << '\n';
            if (d.severity == Severity::error) failed = true;
            L.diagnostics.push_back(d);
        }
    };
    if (!files.digital.empty()) {
        const auto text = slurp(files.digital);
        L.manifest.inputs.push_back({"digital", files.digital, sha256_hex(text)});
        auto r = parse_digital(text, files.digital);
        report(r.diagnostics);
        L.soc.name = r.soc_name;
        L.soc.digital_cores = std::move(r.cores);
    }
    if (!files.analog.empty()) {
        const auto text = slurp(files.analog);
        L.manifest.inputs.push_back({"analog", files.analog, sha256_hex(text)});
        auto r = parse_analog(text, files.analog);
        report(r.diagnostics);
        L.soc.analog_cores = std::move(r.cores);
    }
    if (failed) throw DiagnosticsError("input contains errors");
    validate(L.soc);
    L.manifest.knobs = {{"p", g.p},
                        {"mode", g.mode},
                        {"seed", g.seed},
                        {"budget_bits_hz", std::isinf(g.budget) ? json("inf") : json(g.budget)},
                        {"symmetry", !g.no_symmetry},
                        {"preferred_width_slack", g.width_slack},
                        {"packer", g.exact ? "exact" : "heuristic"}};
    return L;
}

inline EnumerationOptions enumeration_options(const GlobalOptions& g) {
    EnumerationOptions o;
    o.mode = g.mode == "restricted" ? EnumerationMode::restricted : EnumerationMode::full;
    o.symmetry = !g.no_symmetry;
    o.policy.budget_bits_hz = g.budget;
    return o;
}

inline void write_manifest(const GlobalOptions& g, const RunManifest& m) {
    if (g.manifest_path.empty()) return;
    std::ofstream out(g.manifest_path, std::ios::binary);
    if (!out) throw DiagnosticsError("cannot write manifest " + g.manifest_path);
    out << m.to_json().dump(2) << '\n';
}

inline std::vector<Wires> parse_widths(const std::string& s) {
    std::vector<Wires> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        auto v = detail::parse_u64(tok);
        if (!v || *v == 0 || *v > UINT32_MAX) throw DiagnosticsError("bad width '" + tok + "'");
        out.push_back(static_cast<Wires>(*v));
    }
    if (out.empty()) throw DiagnosticsError("no widths given");
    return out;
}

inline std::vector<Weights> parse_weights(const std::string& s) {
    std::vector<Weights> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw DiagnosticsError("weights must be wt:wa pairs, got '" + tok + "'");
        try {
            out.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
        } catch (const std::invalid_argument&) {
            throw DiagnosticsError("bad weight pair '" + tok + "'");
        }
    }
    if (out.empty()) throw DiagnosticsError("no weight pairs given");
    return out;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Test planning for mixed-signal SOCs with wrapped analog cores", "mstestplan"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--p", g.p, "routing overhead factor per extra core sharing a wrapper")
        ->capture_default_str();
    app.add_option("--mode", g.mode, "sharing enumeration: full | restricted")
        ->check(CLI::IsMember({"full", "restricted"}))
        ->capture_default_str();
    app.add_option("--seed", g.seed, "reserved (all algorithms are deterministic)");
    app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--manifest", g.manifest_path, "write the run manifest (inputs, digests, knobs) to this file");
    app.add_option("--budget", g.budget, "converter budget in bits*Hz for wrapper sharing (default: unlimited)");
    app.add_flag("--no-symmetry", g.no_symmetry, "keep configurations that differ only by identical cores");
    app.add_option("--width-slack", g.width_slack, "preferred digital width tolerance")->capture_default_str();
    app.add_flag("--exact", g.exact, "use the exhaustive packer (small instances only)");

    InputFiles files;
    auto add_inputs = [&](CLI::App* sub, bool digital_required, bool analog_required) {
        auto* d = sub->add_option("--digital", files.digital, "ITC'02-subset digital SOC file")
                      ->check(CLI::ExistingFile);
        auto* a = sub->add_option("--analog", files.analog, "analog test menu file")->check(CLI::ExistingFile);
        if (digital_required) d->required();
        if (analog_required) a->required();
    };

    bool check = false;
    auto* parse_cmd = app.add_subcommand("parse", "parse and validate input files");
    add_inputs(parse_cmd, false, false);
    parse_cmd->add_flag("--check", check, "print every diagnostic, including warnings");

    Wires max_width = 0;
    auto* wrapper_cmd = app.add_subcommand("wrapper-table", "digital core test time versus TAM width");
    add_inputs(wrapper_cmd, true, false);
    wrapper_cmd->add_option("--max-width", max_width, "largest TAM width")->required()->check(CLI::PositiveNumber);

    auto* combos_cmd = app.add_subcommand("combos", "enumerate wrapper-sharing configurations");
    add_inputs(combos_cmd, false, true);

    Wires width = 0;
    std::string config_text;
    bool quiet = false;
    auto* schedule_cmd = app.add_subcommand("schedule", "schedule one sharing configuration");
    add_inputs(schedule_cmd, false, false);
    schedule_cmd->add_option("--width", width, "SOC TAM width W")->required()->check(CLI::PositiveNumber);
    schedule_cmd->add_option("--config", config_text, "sharing blocks, e.g. \"{A,C}{D,E}\"");
    schedule_cmd->add_flag("--quiet", quiet, "omit the Gantt chart");

    double wt = 0.5, wa = 0.5, delta = 0.0;
    bool exhaustive = false;
    auto* optimize_cmd = app.add_subcommand("optimize", "minimize the weighted time/area cost");
    add_inputs(optimize_cmd, false, true);
    optimize_cmd->add_option("--width", width, "SOC TAM width W")->required()->check(CLI::PositiveNumber);
    optimize_cmd->add_option("--wt", wt, "test time weight")->capture_default_str();
    optimize_cmd->add_option("--wa", wa, "area weight")->capture_default_str();
    optimize_cmd->add_option("--delta", delta, "group elimination threshold")->capture_default_str();
    optimize_cmd->add_flag("--exhaustive", exhaustive, "evaluate every configuration");
    optimize_cmd->add_flag("--quiet", quiet, "omit the summary");

    std::string widths_text = "32,48,64";
    std::string weights_text = "0.5:0.5,0.8:0.2,0.2:0.8";
    std::string table = "all";
    auto* sweep_cmd = app.add_subcommand("sweep", "exhaustive versus heuristic over a W / weight grid");
    add_inputs(sweep_cmd, false, true);
    sweep_cmd->add_option("--widths", widths_text, "comma-separated TAM widths")->capture_default_str();
    sweep_cmd->add_option("--weights", weights_text, "comma-separated wt:wa pairs")->capture_default_str();
    sweep_cmd->add_option("--delta", delta, "group elimination threshold")->capture_default_str();
    sweep_cmd->add_option("--table", table, "times | costs | spread | all (csv only)")
        ->check(CLI::IsMember({"times", "costs", "spread", "all"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitDiagnostics;
    }

    const bool as_json = g.format == "json";
    try {
        if (!(g.p > 0.0 && g.p <= 1.0)) throw DiagnosticsError("--p must lie in (0, 1]");
        if (!(g.width_slack >= 0.0)) throw DiagnosticsError("--width-slack must be >= 0");
        const Packer packer = g.exact ? Packer::exact : Packer::heuristic;
        const PackOptions pack_opts{g.width_slack};

        if (parse_cmd->parsed()) {
            if (files.digital.empty() && files.analog.empty())
                throw DiagnosticsError("parse: give --digital and/or --analog");
            Loaded L;
            try {
                L = load(files, g, err, check);
            } catch (const DiagnosticsError& e) {
                err << "error: " << e.what() << '\n';
                return kExitDiagnostics;
            }
            write_manifest(g, L.manifest);
            std::size_t warnings = 0;
            for (const auto& d : L.diagnostics) warnings += d.severity == Severity::warning;
            if (as_json) {
                json digital = json::array(), analog = json::array();
                for (const auto& c : L.soc.digital_cores)
                    digital.push_back({{"id", c.id},
                                       {"inputs", c.inputs},
                                       {"outputs", c.outputs},
                                       {"bidirs", c.bidirs},
                                       {"scan_chains", c.scan_chains},
                                       {"patterns", c.patterns}});
                for (const auto& c : L.soc.analog_cores)
                    analog.push_back({{"id", c.id},
                                      {"area", c.wrapper_area},
                                      {"tests", c.tests.size()},
                                      {"total_test_cycles", total_test_cycles(c)}});
                out << json{{"manifest", L.manifest.to_json()},
                            {"soc", L.soc.name},
                            {"digital_cores", digital},
                            {"analog_cores", analog},
                            {"warnings", warnings}}
                           .dump(2)
                    << '\n';
            } else {
                out << "digital cores: " << L.soc.digital_cores.size() << '\n'
                    << "analog cores: " << L.soc.analog_cores.size() << '\n'
                    << "warnings: " << warnings << '\n';
            }
            return kExitOk;
        }

        Loaded L;
        try {
            L = load(files, g, err);
        } catch (const DiagnosticsError& e) {
            err << "error: " << e.what() << '\n';
            return kExitDiagnostics;
        }
        const auto& soc = L.soc;

        if (wrapper_cmd->parsed()) {
            L.manifest.knobs["max_width"] = max_width;
            const auto stairs = staircases(soc.digital_cores, max_width);
            if (as_json) {
                auto j = wrapper_table_json(stairs);
                j["manifest"] = L.manifest.to_json();
                out << j.dump(2) << '\n';
            } else {
                out << wrapper_table_csv(stairs);
            }
            write_manifest(g, L.manifest);
            return kExitOk;
        }

        if (combos_cmd->parsed()) {
            const auto cat = enumerate(soc, enumeration_options(g));
            if (as_json) {
                auto j = combos_json(soc, cat);
                j["manifest"] = L.manifest.to_json();
                out << j.dump(2) << '\n';
            } else {
                out << combos_csv(soc, cat);
            }
            write_manifest(g, L.manifest);
            return kExitOk;
        }

        if (schedule_cmd->parsed()) {
            if (files.digital.empty() && files.analog.empty())
                throw DiagnosticsError("schedule: give --digital and/or --analog");
            const auto cfg = config_text.empty() ? SharingConfig::no_sharing(soc.analog_cores.size())
                                                 : parse_config(config_text, soc);
            const auto stairs = staircases(soc.digital_cores, width);
            const auto s = schedule({soc, cfg, width, stairs, pack_opts}, packer);
            L.manifest.knobs["W"] = width;
            json j = {{"manifest", L.manifest.to_json()},
                      {"config", format_config(cfg, soc)},
                      {"schedule", to_json(s)}};
            if (!soc.analog_cores.empty()) {
                j["C_A"] = area_cost(cfg, soc);
                j["t_LB_cycles"] = lower_bound(cfg, soc).cycles;
            }
            out << j.dump(2) << '\n';
            if (!quiet && !as_json) err << gantt(s);
            write_manifest(g, L.manifest);
            return kExitOk;
        }

        if (optimize_cmd->parsed()) {
            const Weights weights(wt, wa);
            const auto cat = enumerate(soc, enumeration_options(g));
            const auto stairs = staircases(soc.digital_cores, width);
            OptimizerConfig oc{width, weights, delta,
                               exhaustive ? OptimizerMode::exhaustive : OptimizerMode::heuristic};
            const auto res = optimize(soc, cat, oc, stairs, packer, pack_opts);
            L.manifest.knobs["W"] = width;
            L.manifest.knobs["omega_t"] = wt;
            L.manifest.knobs["omega_a"] = wa;
            L.manifest.knobs["delta"] = delta;
            L.manifest.knobs["optimizer"] = exhaustive ? "exhaustive" : "heuristic";
            auto j = to_json(res, cat, soc);
            j["manifest"] = L.manifest.to_json();
            out << j.dump(2) << '\n';
            if (!quiet && !as_json) err << optimizer_summary(res, soc);
            write_manifest(g, L.manifest);
            return kExitOk;
        }

        if (sweep_cmd->parsed()) {
            const auto widths = parse_widths(widths_text);
            const auto weights = parse_weights(weights_text);
            const auto cat = enumerate(soc, enumeration_options(g));
            const auto res = report_sweep(soc, cat, widths, weights, delta, packer, pack_opts);
            if (as_json) {
                L.manifest.knobs["widths"] = widths;
                L.manifest.knobs["delta"] = delta;
                auto j = to_json(res, soc, cat);
                j["manifest"] = L.manifest.to_json();
                out << j.dump(2) << '\n';
            } else {
                const bool all = table == "all";
                if (all || table == "times") out << sweep_times_csv(res, soc, cat);
                if (all) out << '\n';
                if (all || table == "costs") out << sweep_costs_csv(res, soc);
                if (all) out << '\n';
                if (all || table == "spread") out << sweep_spread_csv(res);
            }
            write_manifest(g, L.manifest);
            return kExitOk;
        }
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDiagnostics;
    }
    return kExitDiagnostics;
}

}  // namespace mstestplan::cli

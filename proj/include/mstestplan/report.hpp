#pragma once

// Report generation: CSV tables, JSON documents, ASCII Gantt charts, W/weight
// sweeps and the run manifest that pins every input and knob.

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mstestplan/itc02.hpp"
#include "mstestplan/model.hpp"
#include "mstestplan/optimizer.hpp"
#include "mstestplan/schedule.hpp"
#include "mstestplan/sharing.hpp"
#include "mstestplan/wrapper.hpp"

namespace mstestplan {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

/// One decimal place, truncated toward zero, as in the published tables.
/// The 1e-9 guard keeps values such as 82.99999999999 at 83.0.
inline std::string format_tenths(double v) {
    const double scaled = v * 10.0;
    const double t = std::trunc(scaled + (scaled >= 0 ? 1e-9 : -1e-9));
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << t / 10.0;
    auto s = out.str();
    return s == "-0.0" ? "0.0" : s;
}

inline double truncate_tenths(double v) { return std::stod(format_tenths(v)); }

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline double delta_eta(std::size_t eta, std::size_t eta_exh) {
    return (static_cast<double>(eta) - static_cast<double>(eta_exh)) / static_cast<double>(eta_exh) * 100.0;
}

// ---------------------------------------------------------------- sharing table

/// Catalog rows in table order: by area group, then descending lower bound.
inline std::vector<std::size_t> combos_order(const SharingCatalog& cat) {
    std::vector<std::size_t> rows;
    for (const auto& g : cat.groups) {
        auto members = g;
        std::stable_sort(members.begin(), members.end(), [&](auto a, auto b) {
            return cat.configs[a].t_lb_cycles > cat.configs[b].t_lb_cycles;
        });
        rows.insert(rows.end(), members.begin(), members.end());
    }
    return rows;
}

inline std::string combos_csv(const Soc& soc, const SharingCatalog& cat) {
    std::ostringstream out;
    out << "n_wrappers,blocks,C_A,t_LB_cycles,t_LB_norm\n";
    for (auto idx : combos_order(cat)) {
        const auto& e = cat.configs[idx];
        out << e.config.wrapper_count() << ',' << csv_field(format_config(e.config, soc)) << ','
            << format_tenths(e.c_a) << ',' << e.t_lb_cycles << ',' << format_tenths(e.t_lb_normalized) << '\n';
    }
    return out.str();
}

inline json combos_json(const Soc& soc, const SharingCatalog& cat) {
    json rows = json::array();
    for (auto idx : combos_order(cat)) {
        const auto& e = cat.configs[idx];
        std::size_t group = 0;
        for (std::size_t g = 0; g < cat.groups.size(); ++g)
            if (std::find(cat.groups[g].begin(), cat.groups[g].end(), idx) != cat.groups[g].end()) group = g;
        rows.push_back({{"n_wrappers", e.config.wrapper_count()},
                        {"blocks", format_config(e.config, soc)},
                        {"group", group},
                        {"C_A", e.c_a},
                        {"t_LB_cycles", e.t_lb_cycles},
                        {"t_LB_norm", e.t_lb_normalized}});
    }
    return {{"configs", cat.configs.size()}, {"groups", cat.groups.size()}, {"rows", rows}};
}

// ---------------------------------------------------------------- wrapper table

inline std::string wrapper_table_csv(const std::vector<Staircase>& stairs) {
    std::ostringstream out;
    out << "core_id,width,s_i,s_o,test_time\n";
    for (const auto& sc : stairs)
        for (const auto& p : sc.points())
            out << csv_field(sc.core_id()) << ',' << p.width << ',' << p.scan_in << ',' << p.scan_out << ','
                << p.test_time << '\n';
    return out.str();
}

inline json wrapper_table_json(const std::vector<Staircase>& stairs) {
    json cores = json::array();
    for (const auto& sc : stairs) {
        json pts = json::array();
        for (const auto& p : sc.points())
            pts.push_back({{"width", p.width}, {"s_i", p.scan_in}, {"s_o", p.scan_out}, {"test_time", p.test_time}});
        cores.push_back({{"core_id", sc.core_id()}, {"points", pts}});
    }
    return {{"cores", cores}};
}

// ---------------------------------------------------------------- schedules

inline json to_json(const Schedule& s) {
    json items = json::array();
    for (const auto& it : s.items) {
        json j = {{"core_id", it.core_id},
                  {"kind", it.kind == TestKind::digital ? "digital" : "analog"},
                  {"start", it.start},
                  {"duration", it.duration},
                  {"width", it.width}};
        if (it.kind == TestKind::analog) j["test_index"] = it.test_index;
        items.push_back(std::move(j));
    }
    return {{"tam_width", s.tam_width}, {"makespan", s.makespan()}, {"items", items}};
}

/// Wire-level picture of a schedule. Wires are assigned for display only:
/// each item takes the lowest-numbered wires free at its start. Rows are
/// wire bands, columns are time buckets (at most `max_columns`).
inline std::string gantt(const Schedule& s, std::size_t max_columns = 120, std::size_t max_rows = 64) {
    std::ostringstream out;
    const auto span = s.makespan();
    if (span == 0 || s.tam_width == 0 || s.items.empty()) {
        out << "(empty schedule)\n";
        return out.str();
    }
    const Cycles bucket = (span + max_columns - 1) / max_columns;
    const auto columns = static_cast<std::size_t>((span + bucket - 1) / bucket);
    const Wires band = static_cast<Wires>((s.tam_width + max_rows - 1) / max_rows);
    const auto rows = static_cast<std::size_t>((s.tam_width + band - 1) / band);

    static const std::string symbols =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789@$%&*+=?";
    std::vector<std::string> legend_ids;
    auto symbol_for = [&](const std::string& id) {
        auto it = std::find(legend_ids.begin(), legend_ids.end(), id);
        std::size_t k = static_cast<std::size_t>(it - legend_ids.begin());
        if (it == legend_ids.end()) legend_ids.push_back(id);
        return symbols[k % symbols.size()];
    };

    std::vector<Cycles> free_at(s.tam_width, 0);
    std::vector<std::string> grid(rows, std::string(columns, '.'));
    std::vector<std::size_t> order(s.items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.items[a].start < s.items[b].start; });
    for (auto k : order) {
        const auto& it = s.items[k];
        const char sym = symbol_for(it.core_id);
        Wires taken = 0;
        for (Wires wire = 0; wire < s.tam_width && taken < it.width; ++wire) {
            if (free_at[wire] > it.start) continue;
            free_at[wire] = it.end();
            ++taken;
            const auto c0 = static_cast<std::size_t>(it.start / bucket);
            const auto c1 = static_cast<std::size_t>((it.end() + bucket - 1) / bucket);
            for (auto c = c0; c < std::min(c1, columns); ++c) {
                char& cell = grid[wire / band][c];
                if (cell == '.') cell = sym;
            }
        }
    }
    out << "W=" << s.tam_width << " makespan=" << span << " cycles; 1 column = " << bucket << " cycles";
    if (band > 1) out << "; 1 row = " << band << " wires";
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        std::ostringstream label;
        label << std::setw(4) << r * band;
        out << label.str() << " |" << grid[r] << "|\n";
    }
    out << "legend:";
    for (std::size_t k = 0; k < legend_ids.size(); ++k) out << ' ' << symbols[k % symbols.size()] << '=' << legend_ids[k];
    out << '\n';
    return out.str();
}

// ---------------------------------------------------------------- optimizer

inline json to_json(const CostReport& r, const Soc& soc) {
    return {{"W", r.tam_width},        {"omega_t", r.omega_t},   {"omega_a", r.omega_a},
            {"C_T", r.c_t},            {"C_A", r.c_a},           {"C", r.cost},
            {"T", r.t_of_w},           {"T_m", r.t_m_of_w},      {"eta", r.eta},
            {"config", format_config(r.config, soc)}};
}

inline json to_json(const OptimizerResult& res, const SharingCatalog& cat, const Soc& soc) {
    json trace = json::array();
    for (const auto& t : res.trace) {
        json e = {{"step", t.step}};
        if (t.config) e["config"] = format_config(cat.configs[*t.config].config, soc);
        if (t.group) e["group"] = *t.group;
        e["value"] = t.value;
        trace.push_back(std::move(e));
    }
    json evaluated = json::array();
    for (auto i : res.evaluated) evaluated.push_back(format_config(cat.configs[i].config, soc));
    return {{"best", to_json(res.best, soc)},
            {"eta", res.eta},
            {"eliminated_groups", res.eliminated_groups},
            {"evaluated", evaluated},
            {"trace", trace}};
}

inline std::string optimizer_summary(const OptimizerResult& res, const Soc& soc) {
    std::ostringstream out;
    const auto& b = res.best;
    out << "best sharing: " << format_config(b.config, soc) << " (" << b.config.wrapper_count() << " wrappers)\n"
        << "C = " << format_tenths(b.cost) << "  C_T = " << format_tenths(b.c_t) << "  C_A = " << format_tenths(b.c_a)
        << "\n"
        << "T(W) = " << b.t_of_w << " cycles, T_m(W) = " << b.t_m_of_w << " cycles, W = " << b.tam_width << "\n"
        << "eta = " << res.eta << "\n";
    return out.str();
}

// ---------------------------------------------------------------- sweeps

struct SweepCostRow {
    Wires W = 0;
    double omega_t = 0.0;
    double omega_a = 0.0;
    OptimizerResult exhaustive;
    OptimizerResult heuristic;
};

struct SweepWidth {
    Wires W = 0;
    Cycles t_m = 0;
    std::vector<double> c_t;  // per catalog config
    double spread() const {
        if (c_t.empty()) return 0.0;
        auto [lo, hi] = std::minmax_element(c_t.begin(), c_t.end());
        return *hi - *lo;
    }
};

struct SweepResult {
    std::vector<SweepWidth> widths;
    std::vector<SweepCostRow> costs;
};

/// Runs the exhaustive and heuristic optimizers at every (W, weights) grid
/// point. Widths are processed concurrently; results keep grid order.
inline SweepResult report_sweep(const Soc& soc, const SharingCatalog& cat, const std::vector<Wires>& widths,
                                const std::vector<Weights>& weights, double delta, Packer packer = Packer::heuristic,
                                PackOptions options = {}) {
    struct PerWidth {
        SweepWidth width;
        std::vector<SweepCostRow> costs;
    };
    auto run = [&](Wires W) {
        PerWidth out;
        const auto stairs = staircases(soc.digital_cores, W);
        MakespanCache cache(soc, W, stairs, packer, options);
        out.width.W = W;
        out.width.t_m = cache.makespan(SharingConfig::all_shared(soc.analog_cores.size()));
        for (const auto& e : cat.configs)
            out.width.c_t.push_back(100.0 * static_cast<double>(cache.makespan(e.config)) /
                                    static_cast<double>(out.width.t_m));
        for (const auto& w : weights) {
            SweepCostRow row;
            row.W = W;
            row.omega_t = w.time();
            row.omega_a = w.area();
            row.exhaustive = optimize(cat, {W, w, delta, OptimizerMode::exhaustive}, cache);
            row.heuristic = optimize(cat, {W, w, delta, OptimizerMode::heuristic}, cache);
            out.costs.push_back(std::move(row));
        }
        return out;
    };
    std::vector<std::future<PerWidth>> jobs;
    for (auto W : widths) jobs.push_back(std::async(std::launch::async, run, W));
    SweepResult res;
    for (auto& f : jobs) {
        auto pw = f.get();
        res.widths.push_back(std::move(pw.width));
        for (auto& r : pw.costs) res.costs.push_back(std::move(r));
    }
    return res;
}

inline std::string sweep_times_csv(const SweepResult& res, const Soc& soc, const SharingCatalog& cat) {
    std::ostringstream out;
    out << "W,n_wrappers,blocks,C_T\n";
    for (const auto& w : res.widths)
        for (auto idx : combos_order(cat))
            out << w.W << ',' << cat.configs[idx].config.wrapper_count() << ','
                << csv_field(format_config(cat.configs[idx].config, soc)) << ',' << format_tenths(w.c_t[idx]) << '\n';
    return out.str();
}

inline std::string sweep_costs_csv(const SweepResult& res, const Soc& soc) {
    std::ostringstream out;
    out << "W,omega_t,omega_a,C_exh,eta_exh,S_exh,C,eta,S,delta_eta\n";
    for (const auto& r : res.costs)
        out << r.W << ',' << r.omega_t << ',' << r.omega_a << ',' << format_tenths(r.exhaustive.best.cost) << ','
            << r.exhaustive.eta << ',' << csv_field(format_config(r.exhaustive.best.config, soc)) << ','
            << format_tenths(r.heuristic.best.cost) << ',' << r.heuristic.eta << ','
            << csv_field(format_config(r.heuristic.best.config, soc)) << ','
            << format_tenths(delta_eta(r.heuristic.eta, r.exhaustive.eta)) << '\n';
    return out.str();
}

inline std::string sweep_spread_csv(const SweepResult& res) {
    std::ostringstream out;
    out << "W,T_m,C_T_min,C_T_max,spread\n";
    for (const auto& w : res.widths) {
        auto [lo, hi] = std::minmax_element(w.c_t.begin(), w.c_t.end());
        out << w.W << ',' << w.t_m << ',' << format_tenths(*lo) << ',' << format_tenths(*hi) << ','
            << format_tenths(w.spread()) << '\n';
    }
    return out.str();
}

inline json to_json(const SweepResult& res, const Soc& soc, const SharingCatalog& cat) {
    json widths = json::array();
    for (const auto& w : res.widths) {
        json configs = json::array();
        for (auto idx : combos_order(cat))
            configs.push_back({{"blocks", format_config(cat.configs[idx].config, soc)}, {"C_T", w.c_t[idx]}});
        widths.push_back({{"W", w.W}, {"T_m", w.t_m}, {"spread", w.spread()}, {"configs", configs}});
    }
    json costs = json::array();
    for (const auto& r : res.costs)
        costs.push_back({{"W", r.W},
                         {"omega_t", r.omega_t},
                         {"omega_a", r.omega_a},
                         {"C_exh", r.exhaustive.best.cost},
                         {"eta_exh", r.exhaustive.eta},
                         {"S_exh", format_config(r.exhaustive.best.config, soc)},
                         {"C", r.heuristic.best.cost},
                         {"eta", r.heuristic.eta},
                         {"S", format_config(r.heuristic.best.config, soc)},
                         {"delta_eta", delta_eta(r.heuristic.eta, r.exhaustive.eta)}});
    return {{"test_times", widths}, {"costs", costs}};
}

// ---------------------------------------------------------------- manifest

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return out.str();
}

struct ManifestInput {
    std::string role;  // "digital" | "analog"
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::vector<ManifestInput> inputs;
    json knobs = json::object();
    std::string version = kToolVersion;

    json to_json() const {
        json in = json::array();
        for (const auto& i : inputs) in.push_back({{"role", i.role}, {"path", i.path}, {"sha256", i.sha256}});
        return {{"tool", "mstestplan"}, {"version", version}, {"inputs", in}, {"knobs", knobs}};
    }
};

}  // namespace mstestplan

#pragma once

// Weighted test-time / wrapper-area cost minimization over a sharing catalog,
// either by evaluating every configuration or by the group-pruning heuristic:
// score every configuration with its lower bound, schedule only the best
// scorer of each area group, drop groups whose scheduled cost exceeds the
// best by more than delta, then schedule everything that is left.

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mstestplan/model.hpp"
#include "mstestplan/schedule.hpp"
#include "mstestplan/sharing.hpp"
#include "mstestplan/wrapper.hpp"

namespace mstestplan {

inline double c_temp(const CatalogEntry& e, const Weights& w) {
    return w.time() * e.t_lb_normalized + w.area() * e.c_a;
}

/// Cost of one configuration given T_m(W). Schedules the configuration once.
inline CostReport evaluate(const SharingConfig& cfg, const Soc& soc, Wires W, const Weights& weights,
                           const std::vector<Staircase>& stairs, Cycles t_m, Packer packer = Packer::heuristic,
                           PackOptions options = {}) {
    if (t_m == 0) throw Error("evaluate: T_m(W) must be positive");
    const auto t = schedule({soc, cfg, W, stairs, options}, packer).makespan();
    CostReport r;
    r.tam_width = W;
    r.omega_t = weights.time();
    r.omega_a = weights.area();
    r.c_t = 100.0 * static_cast<double>(t) / static_cast<double>(t_m);
    r.c_a = area_cost(cfg, soc);
    r.cost = weights.time() * r.c_t + weights.area() * r.c_a;
    r.t_of_w = t;
    r.t_m_of_w = t_m;
    r.config = cfg;
    return r;
}

/// Memoized makespans for one (SOC, W, staircases) instance. Lets several
/// optimizer runs at the same width share schedules; each run still counts
/// its own evaluations.
class MakespanCache {
public:
    MakespanCache(const Soc& soc, Wires W, const std::vector<Staircase>& stairs, Packer packer = Packer::heuristic,
                  PackOptions options = {})
        : soc_(soc), W_(W), stairs_(stairs), packer_(packer), options_(options) {}

    Cycles makespan(const SharingConfig& cfg) {
        auto it = memo_.find(cfg);
        if (it != memo_.end()) return it->second;
        const auto t = schedule({soc_, cfg, W_, stairs_, options_}, packer_).makespan();
        memo_.emplace(cfg, t);
        return t;
    }

    const Soc& soc() const { return soc_; }
    Wires width() const { return W_; }

private:
    const Soc& soc_;
    Wires W_;
    const std::vector<Staircase>& stairs_;
    Packer packer_;
    PackOptions options_;
    std::map<SharingConfig, Cycles> memo_;
};

enum class OptimizerMode { heuristic, exhaustive };

struct OptimizerConfig {
    Wires tam_width = 0;
    Weights weights{0.5, 0.5};
    double delta = 0.0;
    OptimizerMode mode = OptimizerMode::heuristic;
};

struct TraceEntry {
    std::string step;  // "c_temp", "t_m", "representative", "eliminate", "evaluate"
    std::optional<std::size_t> config;  // catalog index
    std::optional<std::size_t> group;
    double value = 0.0;

    bool operator==(const TraceEntry&) const = default;
};

struct OptimizerResult {
    CostReport best;
    std::size_t best_index = 0;  // into the catalog
    std::size_t eta = 0;
    std::vector<std::size_t> eliminated_groups;
    std::vector<std::size_t> evaluated;  // catalog indices, in evaluation order
    std::vector<TraceEntry> trace;
};

inline OptimizerResult optimize(const SharingCatalog& catalog, const OptimizerConfig& cfg, MakespanCache& cache) {
    if (catalog.configs.empty()) throw Error("optimize: empty catalog");
    const auto& soc = cache.soc();
    const auto& w = cfg.weights;

    OptimizerResult res;
    std::map<std::size_t, CostReport> reports;  // by catalog index

    const auto all_shared = SharingConfig::all_shared(soc.analog_cores.size());
    const auto all_shared_idx = catalog.find(all_shared);
    const Cycles t_m = cache.makespan(all_shared);
    if (!all_shared_idx) ++res.eta;  // normalization schedule outside the catalog
    res.trace.push_back({"t_m", all_shared_idx, std::nullopt, static_cast<double>(t_m)});

    auto eval = [&](std::size_t idx) -> const CostReport& {
        auto it = reports.find(idx);
        if (it != reports.end()) return it->second;
        const auto& e = catalog.configs[idx];
        const auto t = cache.makespan(e.config);
        CostReport r;
        r.tam_width = cache.width();
        r.omega_t = w.time();
        r.omega_a = w.area();
        r.c_t = 100.0 * static_cast<double>(t) / static_cast<double>(t_m);
        r.c_a = e.c_a;
        r.cost = w.time() * r.c_t + w.area() * r.c_a;
        r.t_of_w = t;
        r.t_m_of_w = t_m;
        r.config = e.config;
        ++res.eta;
        res.evaluated.push_back(idx);
        res.trace.push_back({"evaluate", idx, std::nullopt, r.cost});
        return reports.emplace(idx, std::move(r)).first->second;
    };

    if (cfg.mode == OptimizerMode::exhaustive) {
        for (std::size_t i = 0; i < catalog.configs.size(); ++i) eval(i);
    } else {
        std::vector<double> scores(catalog.configs.size());
        for (std::size_t i = 0; i < catalog.configs.size(); ++i) {
            scores[i] = c_temp(catalog.configs[i], w);
            res.trace.push_back({"c_temp", i, std::nullopt, scores[i]});
        }
        // smallest score per group; ties keep the lower catalog index
        std::vector<std::size_t> reps;
        for (std::size_t g = 0; g < catalog.groups.size(); ++g) {
            std::size_t rep = catalog.groups[g].front();
            for (auto idx : catalog.groups[g])
                if (scores[idx] < scores[rep]) rep = idx;
            reps.push_back(rep);
            res.trace.push_back({"representative", rep, g, scores[rep]});
        }
        double c_min = std::numeric_limits<double>::infinity();
        for (auto rep : reps) c_min = std::min(c_min, eval(rep).cost);
        std::vector<bool> alive(catalog.groups.size(), true);
        for (std::size_t g = 0; g < catalog.groups.size(); ++g) {
            const double c_i = reports.at(reps[g]).cost;
            if (c_i - c_min > cfg.delta) {
                alive[g] = false;
                res.eliminated_groups.push_back(g);
                res.trace.push_back({"eliminate", reps[g], g, c_i - c_min});
            }
        }
        for (std::size_t g = 0; g < catalog.groups.size(); ++g)
            if (alive[g])
                for (auto idx : catalog.groups[g]) eval(idx);
    }

    // argmin over evaluated configurations, ties by catalog order
    std::optional<std::size_t> best;
    for (const auto& [idx, r] : reports)
        if (!best || r.cost < reports.at(*best).cost) best = idx;
    res.best_index = *best;
    res.best = reports.at(*best);
    res.best.eta = res.eta;
    return res;
}

inline OptimizerResult optimize(const Soc& soc, const SharingCatalog& catalog, const OptimizerConfig& cfg,
                                const std::vector<Staircase>& stairs, Packer packer = Packer::heuristic,
                                PackOptions options = {}) {
    MakespanCache cache(soc, cfg.tam_width, stairs, packer, options);
    return optimize(catalog, cfg, cache);
}

}  // namespace mstestplan

#pragma once

// Analog wrapper sharing: area cost of a sharing configuration, the analog
// test-time lower bound, converter compatibility, and enumeration of the
// configuration space grouped by area cost.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "mstestplan/model.hpp"

namespace mstestplan {

inline constexpr double kAreaTolerance = 1e-9;

/// Wrapper area overhead in percent of the no-sharing overhead. A block of n
/// cores costs its largest member area times (1 + (n-1)p) for routing.
inline double area_cost(const SharingConfig& cfg, const Soc& soc) {
    if (soc.analog_cores.empty()) throw Error("area_cost: SOC has no analog cores");
    double total = 0.0;
    for (const auto& c : soc.analog_cores) total += c.wrapper_area;
    double shared = 0.0;
    for (const auto& block : cfg.blocks()) {
        double amax = 0.0;
        for (auto i : block) amax = std::max(amax, soc.analog_cores.at(i).wrapper_area);
        const double routing = static_cast<double>(block.size() - 1) * soc.routing_p;
        shared += (1.0 + routing) * amax;
    }
    return shared / total * 100.0;
}

inline Cycles block_usage(const SharingConfig::Block& block, const Soc& soc) {
    Cycles sum = 0;
    for (auto i : block) sum += total_test_cycles(soc.analog_cores.at(i));
    return sum;
}

struct LowerBound {
    Cycles cycles = 0;
    double normalized = 0.0;  // percent of the all-shared usage
};

/// Analog test-time bound of a configuration: the largest summed usage among
/// wrappers serving two or more cores. With no shared wrapper it falls back
/// to the largest single-core usage.
inline LowerBound lower_bound(const SharingConfig& cfg, const Soc& soc) {
    Cycles shared = 0;
    Cycles any = 0;
    bool has_shared = false;
    for (const auto& block : cfg.blocks()) {
        const auto u = block_usage(block, soc);
        any = std::max(any, u);
        if (block.size() > 1) {
            shared = std::max(shared, u);
            has_shared = true;
        }
    }
    Cycles all = 0;
    for (const auto& c : soc.analog_cores) all += total_test_cycles(c);
    LowerBound lb;
    lb.cycles = has_shared ? shared : any;
    lb.normalized = all == 0 ? 0.0 : 100.0 * static_cast<double>(lb.cycles) / static_cast<double>(all);
    return lb;
}

/// Joint converter requirement of a wrapper block must fit a resolution x
/// sampling-rate budget. The default budget admits everything.
struct CompatibilityPolicy {
    double budget_bits_hz = std::numeric_limits<double>::infinity();

    bool permissive() const { return std::isinf(budget_bits_hz); }
};

inline bool compatible(const std::vector<const AnalogCore*>& block, const CompatibilityPolicy& policy) {
    if (block.size() <= 1 || policy.permissive()) return true;
    unsigned bits = 0;
    double fs = 0.0;
    for (const auto* c : block) {
        bits = std::max(bits, c->max_resolution_bits());
        fs = std::max(fs, c->max_sampling_hz());
    }
    return static_cast<double>(bits) * fs <= policy.budget_bits_hz;
}

inline bool compatible(const SharingConfig& cfg, const Soc& soc, const CompatibilityPolicy& policy) {
    for (const auto& b : cfg.blocks()) {
        std::vector<const AnalogCore*> members;
        for (auto i : b) members.push_back(&soc.analog_cores.at(i));
        if (!compatible(members, policy)) return false;
    }
    return true;
}

enum class EnumerationMode { full, restricted };

struct CatalogEntry {
    SharingConfig config;
    double c_a = 0.0;
    Cycles t_lb_cycles = 0;
    double t_lb_normalized = 0.0;
};

/// Configurations with their precomputed costs, grouped by area cost.
/// Groups are ordered by descending C_A; members by catalog index.
struct SharingCatalog {
    std::vector<CatalogEntry> configs;
    std::vector<std::vector<std::size_t>> groups;

    std::optional<std::size_t> find(const SharingConfig& cfg) const {
        for (std::size_t i = 0; i < configs.size(); ++i)
            if (configs[i].config == cfg) return i;
        return std::nullopt;
    }
};

/// Number of set partitions of an n-element set, via the Bell triangle.
inline std::uint64_t bell_number(unsigned n) {
    std::vector<std::uint64_t> row{1};
    for (unsigned i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

inline constexpr std::size_t kMaxFullEnumerationCores = 12;
inline constexpr std::size_t kMaxRestrictedEnumerationCores = 20;

namespace detail {

// All set partitions of {0..n-1} as restricted growth strings.
inline std::vector<SharingConfig> all_partitions(std::size_t n) {
    std::vector<SharingConfig> out;
    std::vector<std::size_t> rgs(n, 0);
    while (true) {
        std::size_t nblocks = 0;
        for (auto v : rgs) nblocks = std::max(nblocks, v + 1);
        std::vector<SharingConfig::Block> blocks(nblocks);
        for (std::size_t i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
        out.emplace_back(std::move(blocks), n);

        // advance to the next restricted growth string
        std::size_t i = n - 1;
        for (; i >= 1; --i) {
            const auto m = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
            if (rgs[i] <= m) break;
        }
        if (i == 0) return out;
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
    }
}

// One shared block plus singletons, and every two-block partition, plus
// the all-shared partition.
inline std::vector<SharingConfig> restricted_partitions(std::size_t n) {
    std::set<SharingConfig> out;
    out.insert(SharingConfig::all_shared(n));
    if (n >= 2) {
        const std::uint64_t full = (1ULL << n) - 1;
        for (std::uint64_t mask = 1; mask <= full; ++mask) {
            std::vector<std::size_t> in, rest;
            for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? in : rest).push_back(i);
            if (in.size() >= 2) {
                std::vector<SharingConfig::Block> blocks{in};
                for (auto r : rest) blocks.push_back({r});
                out.insert(SharingConfig(std::move(blocks), n));
            }
            if (!rest.empty()) out.insert(SharingConfig({in, rest}, n));
        }
    }
    return {out.begin(), out.end()};
}

// Cores are interchangeable when their test menus and areas are equal.
inline std::vector<std::size_t> interchangeability_classes(const Soc& soc) {
    std::vector<std::size_t> cls(soc.analog_cores.size());
    for (std::size_t i = 0; i < cls.size(); ++i) {
        cls[i] = i;
        for (std::size_t j = 0; j < i; ++j) {
            const auto& a = soc.analog_cores[i];
            const auto& b = soc.analog_cores[j];
            if (a.tests == b.tests && a.wrapper_area == b.wrapper_area) {
                cls[i] = cls[j];
                break;
            }
        }
    }
    return cls;
}

inline std::vector<std::vector<std::size_t>> symmetry_key(const SharingConfig& cfg,
                                                          const std::vector<std::size_t>& cls) {
    std::vector<std::vector<std::size_t>> key;
    for (const auto& b : cfg.blocks()) {
        std::vector<std::size_t> k;
        for (auto i : b) k.push_back(cls[i]);
        std::sort(k.begin(), k.end());
        key.push_back(std::move(k));
    }
    std::sort(key.begin(), key.end());
    return key;
}

inline std::vector<std::vector<std::size_t>> display_key(const SharingConfig& cfg) {
    auto blocks = cfg.blocks();
    std::stable_sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return blocks;
}

}  // namespace detail

struct EnumerationOptions {
    EnumerationMode mode = EnumerationMode::full;
    bool symmetry = true;
    CompatibilityPolicy policy;
};

/// Builds the configuration space for `soc`'s analog cores. Configurations
/// whose area cost exceeds the no-sharing cost, or that violate the
/// compatibility policy, are dropped.
inline SharingCatalog enumerate(const Soc& soc, const EnumerationOptions& opts = {}) {
    const auto n = soc.analog_cores.size();
    if (n == 0) throw Error("enumerate: SOC has no analog cores");
    if (opts.mode == EnumerationMode::restricted && n > kMaxRestrictedEnumerationCores)
        throw Error("enumerate: restricted enumeration limited to " +
                    std::to_string(kMaxRestrictedEnumerationCores) + " analog cores");
    if (opts.mode == EnumerationMode::full && n > kMaxFullEnumerationCores)
        throw Error("enumerate: full enumeration limited to " + std::to_string(kMaxFullEnumerationCores) +
                    " analog cores; use restricted mode");

    auto candidates = opts.mode == EnumerationMode::full ? detail::all_partitions(n)
                                                         : detail::restricted_partitions(n);
    std::sort(candidates.begin(), candidates.end());

    if (opts.symmetry) {
        // Keep one configuration per equivalence class: the one whose
        // largest blocks hold the lowest-numbered cores.
        const auto cls = detail::interchangeability_classes(soc);
        std::map<std::vector<std::vector<std::size_t>>, SharingConfig> keep;
        for (auto& cfg : candidates) {
            auto [it, inserted] = keep.try_emplace(detail::symmetry_key(cfg, cls), cfg);
            if (!inserted && detail::display_key(cfg) < detail::display_key(it->second)) it->second = cfg;
        }
        candidates.clear();
        for (auto& [key, cfg] : keep) candidates.push_back(std::move(cfg));
        std::sort(candidates.begin(), candidates.end());
    }

    SharingCatalog cat;
    for (auto& cfg : candidates) {
        const double ca = area_cost(cfg, soc);
        if (ca > 100.0 + kAreaTolerance) continue;
        if (!compatible(cfg, soc, opts.policy)) continue;
        const auto lb = lower_bound(cfg, soc);
        cat.configs.push_back({std::move(cfg), ca, lb.cycles, lb.normalized});
    }

    // group by C_A, descending
    std::vector<std::size_t> order(cat.configs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return cat.configs[a].c_a > cat.configs[b].c_a; });
    for (auto idx : order) {
        if (!cat.groups.empty() &&
            std::abs(cat.configs[cat.groups.back().front()].c_a - cat.configs[idx].c_a) <= kAreaTolerance)
            cat.groups.back().push_back(idx);
        else
            cat.groups.push_back({idx});
    }
    for (auto& g : cat.groups) std::sort(g.begin(), g.end());
    return cat;
}

}  // namespace mstestplan

#pragma once

// Digital core wrapper design: scan chains and functional I/O cells are
// balanced into w wrapper chains, giving the core's test time at TAM width w.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mstestplan/model.hpp"

namespace mstestplan {

struct WrapperDesign {
    Wires width = 1;
    std::uint64_t scan_in = 0;   // longest wrapper scan-in chain
    std::uint64_t scan_out = 0;  // longest wrapper scan-out chain
    Cycles test_time = 0;

    bool operator==(const WrapperDesign&) const = default;
};

/// Test time of a wrapped core: each pattern shifts for the longer of the two
/// sides and captures once; the final response shift overlaps nothing.
inline Cycles wrapped_test_time(std::uint64_t scan_in, std::uint64_t scan_out, std::uint64_t patterns) {
    const auto hi = std::max(scan_in, scan_out);
    const auto lo = std::min(scan_in, scan_out);
    return (1 + hi) * patterns + lo;
}

namespace detail {

// Best-fit-decreasing assignment of scan chains to `w` wrapper chains. Each
// chain goes to the fullest wrapper chain that can take it without exceeding
// the current longest one; if none can, it goes to the shortest. Ties go to
// the lowest index.
inline std::vector<std::uint64_t> pack_scan_chains(const std::vector<std::uint64_t>& chains, Wires w) {
    std::vector<std::size_t> order(chains.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return chains[a] > chains[b]; });

    std::vector<std::uint64_t> fill(w, 0);
    for (auto idx : order) {
        const auto len = chains[idx];
        const auto longest = *std::max_element(fill.begin(), fill.end());
        std::size_t best = fill.size();
        for (std::size_t k = 0; k < fill.size(); ++k) {
            if (fill[k] + len > longest) continue;
            if (best == fill.size() || fill[k] > fill[best]) best = k;
        }
        if (best == fill.size()) best = static_cast<std::size_t>(std::min_element(fill.begin(), fill.end()) - fill.begin());
        fill[best] += len;
    }
    return fill;
}

// Unit-length wrapper cells go one at a time to the shortest chain.
inline std::uint64_t add_cells(std::vector<std::uint64_t> fill, std::uint64_t cells) {
    if (fill.empty()) return 0;
    // Water-filling: raise the shortest chains level by level.
    std::sort(fill.begin(), fill.end());
    const auto n = fill.size();
    std::size_t k = 1;  // fill[0..k) are at the current level
    std::uint64_t level = fill[0];
    while (cells > 0) {
        while (k < n && fill[k] == level) ++k;
        const std::uint64_t next = k < n ? fill[k] : UINT64_MAX;
        const std::uint64_t room = (next - level) * k;
        if (k < n && cells >= room) {
            cells -= room;
            level = next;
            continue;
        }
        level += cells / k;
        const auto rem = cells % k;
        cells = 0;
        if (rem) ++level;
        break;
    }
    return std::max(level, fill.back());
}

}  // namespace detail

inline WrapperDesign design_wrapper(const DigitalCore& core, Wires w) {
    if (w < 1) throw Error("design_wrapper: width must be >= 1");
    const auto chains = detail::pack_scan_chains(core.scan_chains, w);
    WrapperDesign d;
    d.width = w;
    d.scan_in = detail::add_cells(chains, core.scan_in_cells());
    d.scan_out = detail::add_cells(chains, core.scan_out_cells());
    d.test_time = wrapped_test_time(d.scan_in, d.scan_out, core.patterns);
    return d;
}

/// Number of wrapper items on the busier side; beyond this many wires the
/// test time cannot improve.
inline Wires max_useful_width(const DigitalCore& core) {
    const auto chains = core.scan_chains.size();
    const auto items = chains + std::max(core.scan_in_cells(), core.scan_out_cells());
    return static_cast<Wires>(std::clamp<std::uint64_t>(items, 1, UINT32_MAX));
}

/// Test time versus TAM width for one digital core. Non-increasing: a width
/// whose own design is slower reuses the best narrower design.
class Staircase {
public:
    Staircase() = default;

    Staircase(std::string core_id, std::vector<WrapperDesign> points)
        : core_id_(std::move(core_id)), points_(std::move(points)) {}

    const std::string& core_id() const { return core_id_; }
    const std::vector<WrapperDesign>& points() const { return points_; }
    Wires max_width() const { return static_cast<Wires>(points_.size()); }

    /// Design used at width `w`; widths past the last point use the last point.
    const WrapperDesign& at(Wires w) const {
        if (points_.empty()) throw Error("empty staircase for " + core_id_);
        if (w < 1) throw Error("staircase: width must be >= 1");
        return points_[std::min<std::size_t>(w, points_.size()) - 1];
    }
    Cycles time_at(Wires w) const { return at(w).test_time; }

    /// Widths at which the test time strictly drops; the only widths worth assigning.
    std::vector<Wires> pareto_widths(Wires limit) const {
        std::vector<Wires> out;
        Cycles prev = UINT64_MAX;
        for (Wires w = 1; w <= std::min<Wires>(limit, max_width()); ++w) {
            if (time_at(w) < prev) out.push_back(w);
            prev = time_at(w);
        }
        return out;
    }

private:
    std::string core_id_;
    std::vector<WrapperDesign> points_;
};

inline Staircase staircase(const DigitalCore& core, Wires w_max) {
    if (w_max < 1) throw Error("staircase: w_max must be >= 1");
    const Wires cap = std::min(w_max, max_useful_width(core));
    std::vector<WrapperDesign> points;
    points.reserve(cap);
    for (Wires w = 1; w <= cap; ++w) {
        auto d = design_wrapper(core, w);
        if (!points.empty() && points.back().test_time <= d.test_time) {
            auto reuse = points.back();
            reuse.width = w;
            d = reuse;
        }
        points.push_back(d);
    }
    return Staircase(core.id, std::move(points));
}

inline std::vector<Staircase> staircases(const std::vector<DigitalCore>& cores, Wires w_max) {
    std::vector<Staircase> out;
    out.reserve(cores.size());
    for (const auto& c : cores) out.push_back(staircase(c, w_max));
    return out;
}

}  // namespace mstestplan

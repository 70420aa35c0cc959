#pragma once

// Flexible-width TAM scheduling. Every digital core is a rectangle whose
// height (wires) can be traded against length along its staircase; every
// analog wrapper block is one rigid rectangle running its cores' tests back to
// back. Rectangles are packed so that the wires in use never exceed W.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "mstestplan/model.hpp"
#include "mstestplan/wrapper.hpp"

namespace mstestplan {

struct PackOptions {
    /// Preferred digital width: the narrowest width whose test time is within
    /// this fraction of the test time at full TAM width.
    double preferred_width_slack = 0.05;
};

struct ScheduleRequest {
    const Soc& soc;
    const SharingConfig& config;
    Wires tam_width;
    const std::vector<Staircase>& staircases;  // one per digital core, same order
    PackOptions options{};
};

inline constexpr std::size_t kExactJobLimit = 8;

namespace detail {

struct ChainStep {
    std::size_t core = 0;
    std::size_t test = 0;
    Cycles length = 0;
    Wires width = 0;
};

struct Job {
    bool digital = false;
    std::size_t index = 0;  // digital core index, or block index
    std::string id;         // tie-break key
    // (width, duration) choices, widest last; rigid jobs have one choice
    std::vector<std::pair<Wires, Cycles>> choices;
    std::size_t preferred = 0;  // index into choices
    std::vector<ChainStep> chain;
};

struct Placed {
    Cycles start = 0;
    Cycles end = 0;
    Wires width = 0;
};

// Largest total width of `placed` over [t, t + d).
inline Wires peak_usage(const std::vector<Placed>& placed, Cycles t, Cycles d, std::size_t skip = SIZE_MAX) {
    const Cycles e = t + d;
    Wires peak = 0;
    auto usage_at = [&](Cycles x) {
        Wires u = 0;
        for (std::size_t k = 0; k < placed.size(); ++k)
            if (k != skip && placed[k].start <= x && x < placed[k].end) u += placed[k].width;
        return u;
    };
    peak = usage_at(t);
    for (std::size_t k = 0; k < placed.size(); ++k)
        if (k != skip && placed[k].start > t && placed[k].start < e) peak = std::max(peak, usage_at(placed[k].start));
    return peak;
}

// Earliest start at which a (w x d) rectangle fits beside `placed`.
inline Cycles earliest_start(const std::vector<Placed>& placed, Wires w, Cycles d, Wires cap) {
    std::vector<Cycles> candidates{0};
    for (const auto& p : placed) candidates.push_back(p.end);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (auto t : candidates)
        if (peak_usage(placed, t, d) + w <= cap) return t;
    throw InfeasibleError("rectangle wider than the TAM");  // unreachable when w <= cap
}

inline std::vector<Job> build_jobs(const ScheduleRequest& req) {
    const auto& soc = req.soc;
    const Wires W = req.tam_width;
    if (W < 1) throw InfeasibleError("TAM width must be >= 1");
    if (req.staircases.size() != soc.digital_cores.size())
        throw Error("one staircase per digital core required");
    if (req.config.core_count() != soc.analog_cores.size())
        throw Error("sharing configuration does not match the SOC's analog cores");

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < soc.digital_cores.size(); ++i) {
        const auto& sc = req.staircases[i];
        if (sc.core_id() != soc.digital_cores[i].id) throw Error("staircase order does not match digital cores");
        Job j;
        j.digital = true;
        j.index = i;
        j.id = soc.digital_cores[i].id;
        for (auto w : sc.pareto_widths(W)) j.choices.emplace_back(w, sc.time_at(w));
        const double limit = static_cast<double>(sc.time_at(W)) * (1.0 + req.options.preferred_width_slack);
        j.preferred = j.choices.size() - 1;
        for (std::size_t k = 0; k < j.choices.size(); ++k)
            if (static_cast<double>(j.choices[k].second) <= limit) {
                j.preferred = k;
                break;
            }
        jobs.push_back(std::move(j));
    }

    for (std::size_t b = 0; b < req.config.blocks().size(); ++b) {
        const auto& block = req.config.blocks()[b];
        std::vector<std::size_t> cores(block.begin(), block.end());
        std::stable_sort(cores.begin(), cores.end(), [&](auto x, auto y) {
            const auto tx = total_test_cycles(soc.analog_cores[x]);
            const auto ty = total_test_cycles(soc.analog_cores[y]);
            if (tx != ty) return tx > ty;
            return soc.analog_cores[x].id < soc.analog_cores[y].id;
        });
        Job j;
        j.index = b;
        Wires width = 0;
        Cycles length = 0;
        for (auto c : cores) {
            const auto& core = soc.analog_cores[c];
            std::vector<std::size_t> tests(core.tests.size());
            std::iota(tests.begin(), tests.end(), std::size_t{0});
            std::stable_sort(tests.begin(), tests.end(), [&](auto x, auto y) {
                return core.tests[x].length_cycles > core.tests[y].length_cycles;
            });
            for (auto t : tests) {
                const auto& test = core.tests[t];
                if (test.tam_width > W)
                    throw InfeasibleError("analog test " + core.id + "/" + test.name + " needs " +
                                          std::to_string(test.tam_width) + " wires but the TAM has " +
                                          std::to_string(W));
                j.chain.push_back({c, t, test.length_cycles, test.tam_width});
                width = std::max(width, test.tam_width);
                length += test.length_cycles;
            }
        }
        j.id = soc.analog_cores[block.front()].id;
        j.choices = {{width, length}};
        jobs.push_back(std::move(j));
    }
    return jobs;
}

inline Schedule materialize(const ScheduleRequest& req, const std::vector<Job>& jobs,
                            const std::vector<Placed>& placed) {
    Schedule s;
    s.tam_width = req.tam_width;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const auto& j = jobs[k];
        if (j.digital) {
            s.items.push_back({j.id, TestKind::digital, 0, placed[k].start, placed[k].end - placed[k].start,
                               placed[k].width});
        } else {
            Cycles t = placed[k].start;
            for (const auto& step : j.chain) {
                s.items.push_back({req.soc.analog_cores[step.core].id, TestKind::analog, step.test, t, step.length,
                                   step.width});
                t += step.length;
            }
        }
    }
    std::stable_sort(s.items.begin(), s.items.end(), [](const auto& a, const auto& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.core_id != b.core_id) return a.core_id < b.core_id;
        return a.test_index < b.test_index;
    });
    return s;
}

}  // namespace detail

/// Greedy flexible-width rectangle packing. Deterministic.
namespace detail {

// Greedy placement in the given order, then widening into idle wires and
// left-compaction.
inline std::vector<Placed> pack_in_order(const std::vector<Job>& jobs, const std::vector<std::size_t>& order,
                                         const std::vector<std::size_t>& preferred, Wires W) {
    std::vector<Placed> placed(jobs.size());
    std::vector<std::size_t> choice(jobs.size(), 0);
    std::vector<Placed> layout;
    std::vector<std::size_t> layout_job;
    for (auto k : order) {
        const auto& j = jobs[k];
        std::size_t best = preferred[k];
        auto [bw, bd] = j.choices[best];
        Cycles best_start = earliest_start(layout, bw, bd, W);
        for (std::size_t c = best; c-- > 0;) {
            const auto [w, d] = j.choices[c];
            const auto s = earliest_start(layout, w, d, W);
            if (s + d < best_start + bd) {
                best = c;
                best_start = s;
                bd = d;
            }
        }
        choice[k] = best;
        placed[k] = {best_start, best_start + j.choices[best].second, j.choices[best].first};
        layout.push_back(placed[k]);
        layout_job.push_back(k);
    }

    // Widen digital cores into idle wires, latest finishers first.
    std::vector<std::size_t> by_end(jobs.size());
    std::iota(by_end.begin(), by_end.end(), std::size_t{0});
    std::stable_sort(by_end.begin(), by_end.end(), [&](auto a, auto b) {
        if (placed[a].end != placed[b].end) return placed[a].end > placed[b].end;
        return jobs[a].id < jobs[b].id;
    });
    for (auto k : by_end) {
        const auto& j = jobs[k];
        if (!j.digital) continue;
        const auto slot = static_cast<std::size_t>(std::find(layout_job.begin(), layout_job.end(), k) - layout_job.begin());
        for (std::size_t c = j.choices.size(); c-- > choice[k] + 1;) {
            const auto [w, d] = j.choices[c];
            if (peak_usage(layout, placed[k].start, d, slot) + w <= W) {
                choice[k] = c;
                placed[k].end = placed[k].start + d;
                placed[k].width = w;
                layout[slot] = placed[k];
                break;
            }
        }
    }

    // Left-compaction: re-place in start order; no start moves later.
    std::vector<std::size_t> by_start(jobs.size());
    std::iota(by_start.begin(), by_start.end(), std::size_t{0});
    std::stable_sort(by_start.begin(), by_start.end(), [&](auto a, auto b) {
        if (placed[a].start != placed[b].start) return placed[a].start < placed[b].start;
        return jobs[a].id < jobs[b].id;
    });
    std::vector<Placed> compact;
    for (auto k : by_start) {
        const auto d = placed[k].end - placed[k].start;
        const auto s = earliest_start(compact, placed[k].width, d, W);
        placed[k] = {s, s + d, placed[k].width};
        compact.push_back(placed[k]);
    }
    return placed;
}

inline Cycles span_of(const std::vector<Placed>& placed) {
    Cycles m = 0;
    for (const auto& p : placed) m = std::max(m, p.end);
    return m;
}

}  // namespace detail

/// Greedy rectangle packing. The primary attempt gives each digital core its
/// preferred width and orders analog chains first (longest first), then
/// digital cores by preferred-rectangle area. Further attempts vary the job
/// order (area, length, width) and the starting widths (narrowest width
/// finishing within a multiple of the area bound); the shortest result is
/// kept and the primary attempt wins ties.
inline Schedule pack(const ScheduleRequest& req) {
    using namespace detail;
    const Wires W = req.tam_width;
    auto jobs = build_jobs(req);
    const auto n = jobs.size();

    // area bound on the makespan
    Cycles min_area = 0;
    Cycles longest = 0;
    for (const auto& j : jobs) {
        Cycles a = std::numeric_limits<Cycles>::max();
        Cycles d = std::numeric_limits<Cycles>::max();
        for (const auto& [cw, cd] : j.choices) {
            a = std::min(a, static_cast<Cycles>(cw) * cd);
            d = std::min(d, cd);
        }
        min_area += a;
        longest = std::max(longest, d);
    }
    const double bound = static_cast<double>(std::max(longest, (min_area + W - 1) / W));

    std::vector<std::vector<std::size_t>> widths;
    {
        std::vector<std::size_t> p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = jobs[k].preferred;
        widths.push_back(std::move(p));
    }
    for (double f : {1.0, 1.15, 1.3, 1.6, 2.0, std::numeric_limits<double>::infinity()}) {
        std::vector<std::size_t> p(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& c = jobs[k].choices;
            p[k] = c.size() - 1;
            for (std::size_t i = 0; i < c.size(); ++i)
                if (static_cast<double>(c[i].second) <= bound * f) {
                    p[k] = i;
                    break;
                }
            if (std::isinf(f)) p[k] = 0;
        }
        if (std::find(widths.begin(), widths.end(), p) == widths.end()) widths.push_back(std::move(p));
    }

    std::vector<Placed> best;
    for (const auto& pref : widths) {
        auto rect = [&](std::size_t k) { return jobs[k].choices[pref[k]]; };
        auto area = [&](std::size_t k) { return rect(k).second * rect(k).first; };
        auto by = [&](auto key, bool analog_first) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
                if (analog_first && jobs[a].digital != jobs[b].digital) return !jobs[a].digital;
                const auto ka = key(a), kb = key(b);
                if (ka != kb) return ka > kb;
                return jobs[a].id < jobs[b].id;
            });
            return order;
        };
        const std::vector<std::vector<std::size_t>> orders{
            by([&](std::size_t k) { return jobs[k].digital ? area(k) : rect(k).second; }, true),
            by(area, false),
            by([&](std::size_t k) { return rect(k).second; }, false),
            by([&](std::size_t k) { return static_cast<Cycles>(rect(k).first); }, false),
        };
        for (const auto& order : orders) {
            auto placed = pack_in_order(jobs, order, pref, W);
            if (best.empty() || span_of(placed) < span_of(best)) best = std::move(placed);
        }
    }
    if (n == 0) best.clear();
    return materialize(req, jobs, best);
}

/// Minimum-makespan schedule by exhaustive search over job orders and digital
/// widths, each job placed at its earliest feasible start. Every active
/// schedule arises this way, so the result is optimal for the job model.
inline Schedule exact_pack(const ScheduleRequest& req, std::size_t limit = kExactJobLimit) {
    using namespace detail;
    const Wires W = req.tam_width;
    const auto jobs = build_jobs(req);
    if (jobs.size() > limit)
        throw Error("exact_pack: " + std::to_string(jobs.size()) + " jobs exceed the limit of " +
                    std::to_string(limit));

    // area-based global bound
    Cycles min_area = 0;
    Cycles longest_min = 0;
    for (const auto& j : jobs) {
        Cycles a = std::numeric_limits<Cycles>::max();
        Cycles shortest = std::numeric_limits<Cycles>::max();
        for (const auto& [w, d] : j.choices) {
            a = std::min(a, static_cast<Cycles>(w) * d);
            shortest = std::min(shortest, d);
        }
        min_area += a;
        longest_min = std::max(longest_min, shortest);
    }
    const Cycles global_lb = std::max(longest_min, (min_area + W - 1) / W);

    Cycles best = std::numeric_limits<Cycles>::max();
    std::vector<Placed> best_placed;
    std::vector<Placed> placed(jobs.size());
    std::vector<Placed> layout;
    std::vector<bool> used(jobs.size(), false);

    auto dfs = [&](auto&& self, std::size_t depth, Cycles span) -> void {
        if (best == global_lb) return;
        if (depth == jobs.size()) {
            if (span < best) {
                best = span;
                best_placed = placed;
            }
            return;
        }
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            if (used[k]) continue;
            for (const auto& [w, d] : jobs[k].choices) {
                const auto s = earliest_start(layout, w, d, W);
                const auto e = s + d;
                if (std::max(span, e) >= best) continue;
                used[k] = true;
                placed[k] = {s, e, w};
                layout.push_back(placed[k]);
                self(self, depth + 1, std::max(span, e));
                layout.pop_back();
                used[k] = false;
            }
        }
    };
    dfs(dfs, 0, 0);
    if (jobs.empty()) best_placed.clear();
    return materialize(req, jobs, best_placed);
}

enum class Packer { heuristic, exact };

inline Schedule schedule(const ScheduleRequest& req, Packer packer) {
    return packer == Packer::exact ? exact_pack(req) : pack(req);
}

/// T_m(W): makespan with every analog core behind one shared wrapper.
inline Cycles makespan_all_shared(const Soc& soc, Wires W, const std::vector<Staircase>& stairs,
                                  Packer packer = Packer::heuristic, PackOptions options = {}) {
    const auto cfg = SharingConfig::all_shared(soc.analog_cores.size());
    return schedule({soc, cfg, W, stairs, options}, packer).makespan();
}

/// Independent check of a schedule: wire capacity at every event point,
/// mutual exclusion of cores sharing a wrapper, and that every test runs
/// exactly once. Returns human-readable violations; empty means valid.
inline std::vector<std::string> validate_schedule(const Schedule& s, const Soc& soc, const SharingConfig& cfg) {
    std::vector<std::string> errors;
    for (const auto& it : s.items) {
        if (it.duration < 1) errors.push_back(it.core_id + ": zero-length item");
        if (it.width < 1 || it.width > s.tam_width) errors.push_back(it.core_id + ": width outside [1, W]");
    }

    std::set<Cycles> events;
    for (const auto& it : s.items) events.insert(it.start);
    for (auto t : events) {
        std::uint64_t used = 0;
        for (const auto& it : s.items)
            if (it.start <= t && t < it.end()) used += it.width;
        if (used > s.tam_width)
            errors.push_back("capacity exceeded at cycle " + std::to_string(t) + ": " + std::to_string(used) + " > " +
                             std::to_string(s.tam_width));
    }

    auto block_of = [&](const std::string& id) -> std::optional<std::size_t> {
        auto idx = soc.analog_index(id);
        if (!idx) return std::nullopt;
        return cfg.block_of(*idx);
    };
    for (std::size_t a = 0; a < s.items.size(); ++a) {
        const auto& x = s.items[a];
        if (x.kind != TestKind::analog) continue;
        const auto bx = block_of(x.core_id);
        for (std::size_t b = a + 1; b < s.items.size(); ++b) {
            const auto& y = s.items[b];
            if (y.kind != TestKind::analog) continue;
            if (bx && bx == block_of(y.core_id) && x.start < y.end() && y.start < x.end())
                errors.push_back("wrapper conflict: " + x.core_id + " and " + y.core_id + " overlap");
        }
    }

    for (const auto& d : soc.digital_cores) {
        const auto n = std::count_if(s.items.begin(), s.items.end(), [&](const auto& it) {
            return it.kind == TestKind::digital && it.core_id == d.id;
        });
        if (n != 1) errors.push_back("digital core " + d.id + " scheduled " + std::to_string(n) + " times");
    }
    for (const auto& a : soc.analog_cores) {
        for (std::size_t t = 0; t < a.tests.size(); ++t) {
            const auto match = [&](const auto& it) {
                return it.kind == TestKind::analog && it.core_id == a.id && it.test_index == t;
            };
            const auto n = std::count_if(s.items.begin(), s.items.end(), match);
            if (n != 1) {
                errors.push_back("analog test " + a.id + "/" + a.tests[t].name + " scheduled " + std::to_string(n) +
                                 " times");
                continue;
            }
            const auto& it = *std::find_if(s.items.begin(), s.items.end(), match);
            if (it.duration != a.tests[t].length_cycles || it.width < a.tests[t].tam_width)
                errors.push_back("analog test " + a.id + "/" + a.tests[t].name + " has wrong length or width");
        }
    }
    const auto expected = soc.digital_cores.size() +
                          std::accumulate(soc.analog_cores.begin(), soc.analog_cores.end(), std::size_t{0},
                                          [](auto acc, const auto& c) { return acc + c.tests.size(); });
    if (s.items.size() != expected) errors.push_back("unexpected extra schedule items");
    return errors;
}

}  // namespace mstestplan

#include <gtest/gtest.h>

#include <fstream>
#include <future>
#include <numeric>
#include <random>

#include "mstestplan/mstestplan.hpp"
#include "oracles.hpp"

using namespace mstestplan;

namespace {

DigitalCore make_core(std::vector<std::uint64_t> chains, std::uint64_t in, std::uint64_t out, std::uint64_t patterns) {
    DigitalCore d;
    d.id = "d";
    d.scan_chains = std::move(chains);
    d.inputs = in;
    d.outputs = out;
    d.patterns = patterns;
    return d;
}

std::vector<DigitalCore> benchmark_cores() {
    std::ifstream in(std::string(MSTESTPLAN_DATA_DIR) + "/p93791m_like.soc");
    return parse_digital(in).cores;
}

}  // namespace

TEST(DesignWrapper, IoOnlyCoreMatchesSimulation) {
    const auto d = design_wrapper(make_core({}, 4, 4, 10), 4);
    EXPECT_EQ(d.scan_in, 1u);
    EXPECT_EQ(d.scan_out, 1u);
    EXPECT_EQ(d.test_time, 21u);
    EXPECT_EQ(oracle::shift_capture_cycles({1, 1, 1, 1}, {1, 1, 1, 1}, 10), 21u);
}

TEST(DesignWrapper, TwoChainsTwoWiresMatchesSimulation) {
    const auto d = design_wrapper(make_core({10, 10}, 0, 0, 100), 2);
    EXPECT_EQ(d.scan_in, 10u);
    EXPECT_EQ(d.scan_out, 10u);
    EXPECT_EQ(d.test_time, 1110u);
    EXPECT_EQ(oracle::shift_capture_cycles({10, 10}, {10, 10}, 100), 1110u);
}

TEST(DesignWrapper, SingleWireConcatenatesChains) {
    const auto d = design_wrapper(make_core({10, 10}, 0, 0, 1), 1);
    EXPECT_EQ(d.scan_in, 20u);
    EXPECT_EQ(d.scan_out, 20u);
    EXPECT_EQ(d.test_time, 41u);
    EXPECT_EQ(oracle::shift_capture_cycles({20}, {20}, 1), 41u);
}

TEST(DesignWrapper, FormulaAgreesWithSimulationOnRandomLengths) {
    std::mt19937_64 rng(21);
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };
    for (int trial = 0; trial < 300; ++trial) {
        const auto w = pick(1, 6);
        std::vector<std::uint64_t> in(w), out(w);
        for (auto& x : in) x = pick(0, 30);
        for (auto& x : out) x = pick(0, 30);
        const auto p = pick(1, 20);
        const auto si = *std::max_element(in.begin(), in.end());
        const auto so = *std::max_element(out.begin(), out.end());
        EXPECT_EQ(wrapped_test_time(si, so, p), oracle::shift_capture_cycles(in, out, p));
    }
}

TEST(DesignWrapper, AsymmetricIoUsesMinForTail) {
    // 6 inputs, 2 outputs on 2 wires: s_i = 3, s_o = 1
    const auto d = design_wrapper(make_core({}, 6, 2, 5), 2);
    EXPECT_EQ(d.scan_in, 3u);
    EXPECT_EQ(d.scan_out, 1u);
    EXPECT_EQ(d.test_time, oracle::shift_capture_cycles({3, 3}, {1, 1}, 5));
}

TEST(DesignWrapper, BidirsLoadBothSides) {
    auto core = make_core({}, 0, 0, 1);
    core.bidirs = 4;
    const auto d = design_wrapper(core, 2);
    EXPECT_EQ(d.scan_in, 2u);
    EXPECT_EQ(d.scan_out, 2u);
}

TEST(DesignWrapper, ExtraWiresStayEmpty) {
    const auto d = design_wrapper(make_core({7}, 0, 0, 3), 16);
    EXPECT_EQ(d.scan_in, 7u);
    EXPECT_EQ(d.test_time, (1 + 7) * 3 + 7u);
}

TEST(DesignWrapper, BalanceBound) {
    std::mt19937_64 rng(22);
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };
    auto cores = benchmark_cores();
    for (int k = 0; k < 200; ++k) {
        std::vector<std::uint64_t> chains(pick(0, 12));
        for (auto& c : chains) c = pick(1, 400);
        cores.push_back(make_core(chains, pick(0, 200), pick(0, 200), pick(1, 50)));
    }
    for (const auto& core : cores) {
        const auto total_in = std::accumulate(core.scan_chains.begin(), core.scan_chains.end(), core.scan_in_cells());
        const auto longest =
            core.scan_chains.empty() ? 1 : *std::max_element(core.scan_chains.begin(), core.scan_chains.end());
        for (Wires w = 1; w <= 64; ++w) {
            const auto d = design_wrapper(core, w);
            EXPECT_LE(d.scan_in, total_in / w + longest) << core.id << " w=" << w;
            EXPECT_GE(d.scan_in * w, total_in) << core.id << " w=" << w;  // all cells placed
        }
    }
}

TEST(Staircase, TwoEqualChains) {
    const auto s = staircase(make_core({10, 10}, 0, 0, 1), 3);
    ASSERT_GE(s.max_width(), 2u);
    EXPECT_EQ(s.time_at(1), 41u);
    EXPECT_EQ(s.time_at(2), 21u);
    EXPECT_EQ(s.time_at(3), 21u);
    EXPECT_EQ(oracle::shift_capture_cycles({10, 10, 0}, {10, 10, 0}, 1), 21u);
    EXPECT_EQ(s.pareto_widths(3), (std::vector<Wires>{1, 2}));
}

TEST(Staircase, SinglePointAtWidthOne) {
    const auto s = staircase(make_core({5, 9, 2}, 3, 3, 4), 1);
    EXPECT_EQ(s.points().size(), 1u);
    EXPECT_EQ(s.time_at(1), design_wrapper(make_core({5, 9, 2}, 3, 3, 4), 1).test_time);
    EXPECT_EQ(s.time_at(7), s.time_at(1));
}

TEST(Staircase, NonIncreasingOnBenchmark) {
    for (const auto& core : benchmark_cores()) {
        const auto s = staircase(core, 64);
        for (Wires w = 2; w <= 64; ++w) EXPECT_LE(s.time_at(w), s.time_at(w - 1)) << core.id << " w=" << w;
    }
}

TEST(Staircase, ConcurrentConstructionMatchesSequential) {
    const auto cores = benchmark_cores();
    const auto sequential = staircases(cores, 64);
    std::vector<std::future<Staircase>> jobs;
    for (const auto& c : cores) jobs.push_back(std::async(std::launch::async, [&c] { return staircase(c, 64); }));
    for (std::size_t i = 0; i < cores.size(); ++i) {
        const auto s = jobs[i].get();
        ASSERT_EQ(s.points().size(), sequential[i].points().size());
        for (Wires w = 1; w <= s.max_width(); ++w) EXPECT_EQ(s.time_at(w), sequential[i].time_at(w));
    }
}

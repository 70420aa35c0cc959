#include <gtest/gtest.h>

#include <random>

#include "mstestplan/mstestplan.hpp"
#include "oracles.hpp"

using namespace mstestplan;

namespace {

AnalogCore analog(const std::string& id, std::vector<std::pair<Cycles, Wires>> tests) {
    AnalogCore c;
    c.id = id;
    for (auto [len, w] : tests) c.tests.push_back({"t" + std::to_string(c.tests.size()), 0, 0, 1e4, len, w, 8});
    return c;
}

Soc two_analog() {
    Soc soc;
    soc.analog_cores = {analog("V", {{700, 1}}), analog("E", {{2500, 1}})};
    return soc;
}

const std::vector<Staircase> kNoStairs;

}  // namespace

TEST(Pack, SingleDigitalCoreTakesBestWidth) {
    Soc soc;
    DigitalCore d;
    d.id = "d";
    d.patterns = 1;
    soc.digital_cores.push_back(d);
    const std::vector<Staircase> stairs{Staircase("d", {{1, 0, 0, 100}, {2, 0, 0, 60}})};
    const SharingConfig none;
    const auto s = pack({soc, none, 2, stairs});
    EXPECT_EQ(s.makespan(), 60u);
    EXPECT_EQ(exact_pack({soc, none, 2, stairs}).makespan(), 60u);
}

TEST(Pack, SharedWrapperSerializesTests) {
    const auto soc = two_analog();
    const auto shared = SharingConfig::all_shared(2);
    for (auto packer : {Packer::heuristic, Packer::exact}) {
        const auto s = schedule({soc, shared, 8, kNoStairs}, packer);
        EXPECT_EQ(s.makespan(), 3200u);
        EXPECT_TRUE(oracle::check_schedule(s, soc, shared).empty());
        ASSERT_EQ(s.items.size(), 2u);
        EXPECT_TRUE(s.items[0].end() <= s.items[1].start || s.items[1].end() <= s.items[0].start);
    }
    EXPECT_EQ(pack({soc, SharingConfig::no_sharing(2), 8, kNoStairs}).makespan(), 2500u);
}

TEST(Pack, AllSharedAnalogOnlyEqualsTotalUsage) {
    const auto soc = oracle::five_core_soc();
    for (Wires W : {10u, 16u, 64u}) EXPECT_EQ(makespan_all_shared(soc, W, kNoStairs), 636113u) << W;
}

TEST(Pack, EmptySoc) {
    const Soc soc;
    EXPECT_EQ(makespan_all_shared(soc, 4, kNoStairs), 0u);
    EXPECT_EQ(makespan_all_shared(soc, 4, kNoStairs, Packer::exact), 0u);
}

TEST(Pack, AnalogTestWiderThanTamIsInfeasible) {
    const auto soc = oracle::five_core_soc();
    const auto cfg = SharingConfig::all_shared(5);
    EXPECT_THROW(pack({soc, cfg, 9, kNoStairs}), InfeasibleError);
    EXPECT_THROW(exact_pack({soc, cfg, 9, kNoStairs}), InfeasibleError);
}

TEST(Pack, MismatchedStaircasesAreRejected) {
    Soc soc;
    DigitalCore d;
    d.id = "d";
    soc.digital_cores.push_back(d);
    const SharingConfig none;
    EXPECT_THROW(pack({soc, none, 4, kNoStairs}), Error);
}

TEST(Pack, TableCoresUnderEveryRestrictedConfigAreValid) {
    const auto soc = oracle::five_core_soc();
    const auto cat = enumerate(soc, {EnumerationMode::restricted, true, {}});
    for (Wires W : {10u, 12u, 20u, 64u})
        for (const auto& e : cat.configs) {
            const auto s = pack({soc, e.config, W, kNoStairs});
            EXPECT_TRUE(validate_schedule(s, soc, e.config).empty());
            EXPECT_TRUE(oracle::check_schedule(s, soc, e.config).empty());
            EXPECT_GE(s.makespan(), e.t_lb_cycles);
        }
}

TEST(Pack, MixedBenchmarkIsValidAndDeterministic) {
    std::ifstream in(std::string(MSTESTPLAN_DATA_DIR) + "/p93791m_like.soc");
    Soc soc;
    soc.digital_cores = parse_digital(in).cores;
    soc.analog_cores = oracle::five_cores();
    const auto stairs = staircases(soc.digital_cores, 32);
    const auto cfg = parse_config("{A,C}{D,E}", soc);
    const auto a = pack({soc, cfg, 32, stairs});
    const auto b = pack({soc, cfg, 32, stairs});
    EXPECT_EQ(a, b);
    EXPECT_TRUE(validate_schedule(a, soc, cfg).empty());
    EXPECT_TRUE(oracle::check_schedule(a, soc, cfg).empty());
}

TEST(ExactPack, SingleJob) {
    Soc soc;
    soc.analog_cores = {analog("A", {{17, 3}})};
    EXPECT_EQ(exact_pack({soc, SharingConfig::all_shared(1), 4, kNoStairs}).makespan(), 17u);
}

TEST(ExactPack, UnitJobsRunInParallel) {
    Soc soc;
    soc.analog_cores = {analog("A", {{1, 1}}), analog("B", {{1, 1}}), analog("C", {{1, 1}})};
    const auto none = SharingConfig::no_sharing(3);
    EXPECT_EQ(exact_pack({soc, none, 3, kNoStairs}).makespan(), 1u);
    EXPECT_EQ(exact_pack({soc, none, 2, kNoStairs}).makespan(), 2u);
}

TEST(ExactPack, TooManyJobs) {
    Soc soc;
    for (int i = 0; i < 9; ++i) soc.analog_cores.push_back(analog("c" + std::to_string(i), {{3, 1}}));
    EXPECT_THROW(exact_pack({soc, SharingConfig::no_sharing(9), 4, kNoStairs}), Error);
}

TEST(ExactPack, WideJobsSerialize) {
    // widths 2,2,1,1 and lengths 4,4,8,8 on W=3; best is C 0-8, A 0-4, D 4-12, B 8-12
    Soc soc;
    soc.analog_cores = {analog("A", {{4, 2}}), analog("B", {{4, 2}}), analog("C", {{8, 1}}), analog("D", {{8, 1}})};
    const auto none = SharingConfig::no_sharing(4);
    const auto s = exact_pack({soc, none, 3, kNoStairs});
    EXPECT_EQ(s.makespan(), 12u);
    EXPECT_TRUE(oracle::check_schedule(s, soc, none).empty());
}

TEST(Validator, CatchesOverlapCapacityAndOmission) {
    const auto soc = two_analog();
    const auto shared = SharingConfig::all_shared(2);
    auto s = pack({soc, shared, 1, kNoStairs});
    ASSERT_TRUE(validate_schedule(s, soc, shared).empty());

    auto overlap = s;
    overlap.items[1].start = overlap.items[0].start;
    EXPECT_FALSE(validate_schedule(overlap, soc, shared).empty());
    EXPECT_FALSE(oracle::check_schedule(overlap, soc, shared).empty());

    auto missing = s;
    missing.items.pop_back();
    EXPECT_FALSE(validate_schedule(missing, soc, shared).empty());

    auto shrunk = s;
    shrunk.items[0].duration -= 1;
    EXPECT_FALSE(validate_schedule(shrunk, soc, shared).empty());

    // separate wrappers may overlap in time, but not beyond W
    const auto none = SharingConfig::no_sharing(2);
    auto parallel = pack({soc, none, 2, kNoStairs});
    EXPECT_TRUE(validate_schedule(parallel, soc, none).empty());
    parallel.tam_width = 1;
    EXPECT_FALSE(validate_schedule(parallel, soc, none).empty());
}

TEST(Properties, RandomSchedulesPassBothValidators) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = oracle::random_instance(rng, 6, 50);
        const auto stairs = staircases(inst.soc.digital_cores, inst.W);
        const auto s = pack({inst.soc, inst.config, inst.W, stairs});
        EXPECT_TRUE(validate_schedule(s, inst.soc, inst.config).empty());
        EXPECT_TRUE(oracle::check_schedule(s, inst.soc, inst.config).empty());
        EXPECT_EQ(s, pack({inst.soc, inst.config, inst.W, stairs}));
    }
}

TEST(Properties, ExactNeverWorseThanHeuristic) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = oracle::random_instance(rng, 5, 30);
        const auto stairs = staircases(inst.soc.digital_cores, inst.W);
        const auto e = exact_pack({inst.soc, inst.config, inst.W, stairs});
        EXPECT_LE(e.makespan(), pack({inst.soc, inst.config, inst.W, stairs}).makespan());
        EXPECT_TRUE(oracle::check_schedule(e, inst.soc, inst.config).empty());
    }
}

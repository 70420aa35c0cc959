#include <gtest/gtest.h>

#include "mstestplan/mstestplan.hpp"
#include "oracles.hpp"

using namespace mstestplan;

namespace {

AnalogCore core_with(std::initializer_list<Cycles> lengths) {
    AnalogCore c;
    c.id = "X";
    for (auto l : lengths) {
        AnalogTest t;
        t.name = "t";
        t.f_s = 1.0;
        t.length_cycles = l;
        c.tests.push_back(t);
    }
    return c;
}

}  // namespace

TEST(TotalTestCycles, CoreAFromItsTestMenu) {
    EXPECT_EQ(total_test_cycles(core_with({50000, 13653, 12643, 26973, 700, 32000})), 135969u);
}

TEST(TotalTestCycles, CoreE) { EXPECT_EQ(total_test_cycles(core_with({5400, 2500})), 7900u); }

TEST(TotalTestCycles, SingleUnitTest) { EXPECT_EQ(total_test_cycles(core_with({1})), 1u); }

TEST(TotalTestCycles, ParsedCoresMatchPublishedTotals) {
    const auto soc = oracle::five_core_soc();
    ASSERT_EQ(soc.analog_cores.size(), 5u);
    const std::vector<Cycles> expect{135969, 135969, 299785, 56490, 7900};
    Cycles sum = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(total_test_cycles(soc.analog_cores[i]), expect[i]) << soc.analog_cores[i].id;
        sum += total_test_cycles(soc.analog_cores[i]);
    }
    EXPECT_EQ(sum, 636113u);
}

TEST(Validate, RejectsBadAnalogTests) {
    auto c = core_with({10});
    EXPECT_NO_THROW(validate(c));
    c.tests[0].length_cycles = 0;
    EXPECT_THROW(validate(c), Error);
    c.tests[0].length_cycles = 1;
    c.tests[0].tam_width = 0;
    EXPECT_THROW(validate(c), Error);
    c.tests[0].tam_width = 1;
    c.tests[0].f_min = 2.0;
    c.tests[0].f_max = 1.0;
    EXPECT_THROW(validate(c), Error);
}

TEST(Validate, RejectsDigitalCoreWithoutPatterns) {
    DigitalCore d;
    d.id = "1";
    d.inputs = 3;
    d.patterns = 0;
    EXPECT_THROW(validate(d), Error);
}

TEST(Weights, MustSumToOne) {
    EXPECT_NO_THROW(Weights(0.5, 0.5));
    EXPECT_NO_THROW(Weights(1.0, 0.0));
    EXPECT_NO_THROW(Weights(0.2, 0.8));
    EXPECT_THROW(Weights(0.5, 0.6), Error);
    EXPECT_THROW(Weights(-0.1, 1.1), Error);
}

TEST(SharingConfig, AcceptsPartitionsOnly) {
    EXPECT_NO_THROW(SharingConfig({{0, 2}, {1}}, 3));
    EXPECT_THROW(SharingConfig({{0, 1}, {1, 2}}, 3), Error);  // overlap
    EXPECT_THROW(SharingConfig({{0}, {2}}, 3), Error);        // not covering
    EXPECT_THROW(SharingConfig({{0, 1, 2}, {}}, 3), Error);   // empty block
    EXPECT_THROW(SharingConfig({{0, 3}, {1, 2}}, 3), Error);  // out of range
}

TEST(SharingConfig, CanonicalFormIgnoresInputOrder) {
    EXPECT_EQ(SharingConfig({{2, 0}, {1}}, 3), SharingConfig({{1}, {0, 2}}, 3));
    const auto cfg = SharingConfig({{3, 1}, {0}, {2}}, 4);
    EXPECT_EQ(cfg.block_of(3), cfg.block_of(1));
    EXPECT_NE(cfg.block_of(0), cfg.block_of(1));
    EXPECT_EQ(cfg.wrapper_count(), 3u);
    EXPECT_EQ(cfg.core_count(), 4u);
}

TEST(SharingConfig, ParseAndFormatRoundTrip) {
    const auto soc = oracle::five_core_soc();
    for (const std::string text : {"{A,C}", "{A,B,C}{D,E}", "{A,B,C,D,E}", "{C,D,E}{A,B}"}) {
        const auto cfg = parse_config(text, soc);
        EXPECT_EQ(parse_config(format_config(cfg, soc), soc), cfg) << text;
    }
    EXPECT_EQ(format_config(parse_config("{ A , C }", soc), soc), "{A,C}");
    EXPECT_EQ(format_config(SharingConfig::no_sharing(5), soc), "{A}{B}{C}{D}{E}");
    EXPECT_EQ(parse_config("", soc), SharingConfig::no_sharing(5));
    EXPECT_THROW(parse_config("{A,Z}", soc), Error);
    EXPECT_THROW(parse_config("{A,C}{C,D}", soc), Error);
    EXPECT_THROW(parse_config("{A,C", soc), Error);
}

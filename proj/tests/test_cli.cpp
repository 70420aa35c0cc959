#include <gtest/gtest.h>

#include <sstream>

#include "mstestplan_cli.hpp"

using namespace mstestplan;

namespace {

struct Run {
    int rc;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mstestplan");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

const std::string kData = MSTESTPLAN_DATA_DIR;
const std::string kAnalog = kData + "/analog_menu.txt";
const std::string kDigital = kData + "/p93791m_like.soc";

}  // namespace

TEST(Cli, ParseCountsCores) {
    const auto r = run({"parse", "--digital", kDigital, "--analog", kAnalog});
    EXPECT_EQ(r.rc, 0);
    EXPECT_NE(r.out.find("digital cores: 32"), std::string::npos);
    EXPECT_NE(r.out.find("analog cores: 5"), std::string::npos);
}

TEST(Cli, CombosRestricted) {
    const auto r = run({"--mode", "restricted", "combos", "--analog", kAnalog});
    EXPECT_EQ(r.rc, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 27);
    const auto j = run({"--mode", "restricted", "--format", "json", "combos", "--analog", kAnalog});
    EXPECT_EQ(json::parse(j.out)["configs"], 26);
}

TEST(Cli, ScheduleJson) {
    const auto r = run({"schedule", "--analog", kAnalog, "--width", "16", "--config", "{A,B,C,D,E}", "--quiet"});
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["schedule"]["makespan"], 636113);
    EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ScheduleInfeasibleWidth) {
    const auto r = run({"schedule", "--analog", kAnalog, "--width", "4", "--config", "{A,B,C,D,E}"});
    EXPECT_EQ(r.rc, cli::kExitInfeasible);
    EXPECT_NE(r.err.find("wires"), std::string::npos);
}

TEST(Cli, OptimizeExhaustiveEta) {
    const auto r = run({"--mode", "restricted", "optimize", "--analog", kAnalog, "--width", "16", "--exhaustive", "--quiet"});
    ASSERT_EQ(r.rc, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["eta"], 26);
}

TEST(Cli, BadInputReportsLineAndFails) {
    const auto path = testing::TempDir() + "bad_analog.txt";
    {
        std::ofstream f(path);
        f << "core A\ntest t 2MHz 1MHz 8MHz 5 1\n";
    }
    const auto r = run({"parse", "--analog", path});
    EXPECT_EQ(r.rc, cli::kExitDiagnostics);
    EXPECT_NE(r.err.find(":2: error:"), std::string::npos);
}

TEST(Cli, UnknownOptionFails) { EXPECT_EQ(run({"combos", "--bogus"}).rc, cli::kExitDiagnostics); }

TEST(Cli, WeightsMustSumToOne) {
    EXPECT_NE(run({"optimize", "--analog", kAnalog, "--width", "16", "--wt", "0.7", "--wa", "0.7"}).rc, 0);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const std::vector<std::vector<std::string>> commands{
        {"parse", "--digital", kDigital, "--analog", kAnalog},
        {"--format", "json", "wrapper-table", "--digital", kDigital, "--max-width", "16"},
        {"--mode", "restricted", "combos", "--analog", kAnalog},
        {"schedule", "--digital", kDigital, "--analog", kAnalog, "--width", "32", "--config", "{A,C}{D,E}"},
        {"--mode", "restricted", "optimize", "--analog", kAnalog, "--width", "16"},
    };
    for (const auto& c : commands) {
        const auto a = run(c);
        const auto b = run(c);
        EXPECT_EQ(a.rc, 0) << a.err;
        EXPECT_EQ(sha256_hex(a.out), sha256_hex(b.out));
        EXPECT_EQ(sha256_hex(a.err), sha256_hex(b.err));
    }
}

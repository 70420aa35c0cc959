#pragma once

// Domain types for mixed-signal SOC test planning: analog and digital cores,
// wrapper-sharing configurations, placed schedules and cost reports.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mstestplan {

/// Time in TAM clock cycles. All schedule arithmetic is integral.
using Cycles = std::uint64_t;
/// Number of TAM wires.
using Wires = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when no schedule exists, e.g. an analog test is wider than the TAM.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

inline constexpr unsigned kDefaultResolutionBits = 8;
inline constexpr double kDefaultRoutingP = 0.15;
inline constexpr double kWeightTolerance = 1e-9;

struct AnalogTest {
    std::string name;
    double f_min = 0.0;  // Hz, 0 encodes DC
    double f_max = 0.0;
    double f_s = 0.0;
    Cycles length_cycles = 1;
    Wires tam_width = 1;
    unsigned resolution_bits = kDefaultResolutionBits;

    bool operator==(const AnalogTest&) const = default;
};

struct AnalogCore {
    std::string id;
    std::vector<AnalogTest> tests;
    double wrapper_area = 1.0;

    bool operator==(const AnalogCore&) const = default;

    unsigned max_resolution_bits() const {
        unsigned r = 0;
        for (const auto& t : tests) r = std::max(r, t.resolution_bits);
        return r;
    }
    double max_sampling_hz() const {
        double f = 0.0;
        for (const auto& t : tests) f = std::max(f, t.f_s);
        return f;
    }
    Wires max_tam_width() const {
        Wires w = 0;
        for (const auto& t : tests) w = std::max(w, t.tam_width);
        return w;
    }
};

inline Cycles total_test_cycles(const AnalogCore& core) {
    Cycles sum = 0;
    for (const auto& t : core.tests) sum += t.length_cycles;
    return sum;
}

inline void validate(const AnalogTest& t, const std::string& core_id) {
    const auto where = "analog test " + core_id + "/" + t.name;
    if (t.length_cycles < 1) throw Error(where + ": test length must be >= 1 cycle");
    if (t.tam_width < 1) throw Error(where + ": TAM width must be >= 1");
    if (t.resolution_bits < 1) throw Error(where + ": resolution must be >= 1 bit");
    if (!(t.f_min >= 0.0) || !(t.f_max >= 0.0) || !(t.f_s > 0.0))
        throw Error(where + ": frequencies must be non-negative and f_s positive");
    if (t.f_min > t.f_max) throw Error(where + ": f_min exceeds f_max");
}

inline void validate(const AnalogCore& core) {
    if (core.id.empty()) throw Error("analog core with empty id");
    if (core.tests.empty()) throw Error("analog core " + core.id + " has no tests");
    if (!(core.wrapper_area > 0.0)) throw Error("analog core " + core.id + ": wrapper area must be > 0");
    for (const auto& t : core.tests) validate(t, core.id);
}

struct DigitalCore {
    std::string id;
    std::uint64_t inputs = 0;
    std::uint64_t outputs = 0;
    std::uint64_t bidirs = 0;
    std::vector<std::uint64_t> scan_chains;
    std::uint64_t patterns = 1;

    bool operator==(const DigitalCore&) const = default;

    std::uint64_t scan_in_cells() const { return inputs + bidirs; }
    std::uint64_t scan_out_cells() const { return outputs + bidirs; }
};

inline void validate(const DigitalCore& core) {
    if (core.id.empty()) throw Error("digital core with empty id");
    if (core.patterns < 1) throw Error("digital core " + core.id + ": pattern count must be >= 1");
    for (auto len : core.scan_chains)
        if (len < 1) throw Error("digital core " + core.id + ": scan chain of length 0");
    if (core.scan_in_cells() == 0 && core.scan_out_cells() == 0 && core.scan_chains.empty())
        throw Error("digital core " + core.id + " has no I/O and no scan chains");
}

struct Soc {
    std::string name;
    std::vector<DigitalCore> digital_cores;
    std::vector<AnalogCore> analog_cores;
    double routing_p = kDefaultRoutingP;

    std::optional<std::size_t> analog_index(const std::string& id) const {
        for (std::size_t i = 0; i < analog_cores.size(); ++i)
            if (analog_cores[i].id == id) return i;
        return std::nullopt;
    }
};

inline void validate(const Soc& soc) {
    if (!(soc.routing_p > 0.0 && soc.routing_p <= 1.0))
        throw Error("routing factor p must lie in (0, 1]");
    std::set<std::string> ids;
    for (const auto& c : soc.digital_cores) {
        validate(c);
        if (!ids.insert(c.id).second) throw Error("duplicate core id " + c.id);
    }
    for (const auto& c : soc.analog_cores) {
        validate(c);
        if (!ids.insert(c.id).second) throw Error("duplicate core id " + c.id);
    }
}

/// Partition of analog core indices (into Soc::analog_cores) into wrapper
/// groups. Kept canonical: members sorted, blocks sorted lexicographically.
class SharingConfig {
public:
    using Block = std::vector<std::size_t>;

    SharingConfig() = default;

    /// Throws unless `blocks` partitions {0, ..., n_cores-1} into non-empty blocks.
    SharingConfig(std::vector<Block> blocks, std::size_t n_cores) : blocks_(std::move(blocks)) {
        std::vector<int> seen(n_cores, 0);
        for (auto& b : blocks_) {
            if (b.empty()) throw Error("sharing configuration has an empty block");
            std::sort(b.begin(), b.end());
            for (auto i : b) {
                if (i >= n_cores) throw Error("sharing configuration references unknown core");
                if (seen[i]++) throw Error("sharing configuration blocks overlap");
            }
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end())
            throw Error("sharing configuration does not cover every analog core");
        std::sort(blocks_.begin(), blocks_.end());
    }

    static SharingConfig all_shared(std::size_t n_cores) {
        if (n_cores == 0) return {};
        Block b(n_cores);
        std::iota(b.begin(), b.end(), std::size_t{0});
        return SharingConfig({std::move(b)}, n_cores);
    }

    static SharingConfig no_sharing(std::size_t n_cores) {
        std::vector<Block> blocks;
        for (std::size_t i = 0; i < n_cores; ++i) blocks.push_back({i});
        return SharingConfig(std::move(blocks), n_cores);
    }

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t wrapper_count() const { return blocks_.size(); }

    std::size_t core_count() const {
        std::size_t n = 0;
        for (const auto& b : blocks_) n += b.size();
        return n;
    }

    /// Index of the block containing analog core `core`.
    std::size_t block_of(std::size_t core) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), core)) return i;
        throw Error("core not in sharing configuration");
    }

    /// Canonical order: fewest wrappers first, then lexicographic blocks.
    friend bool operator<(const SharingConfig& a, const SharingConfig& b) {
        if (a.blocks_.size() != b.blocks_.size()) return a.blocks_.size() < b.blocks_.size();
        return a.blocks_ < b.blocks_;
    }
    bool operator==(const SharingConfig&) const = default;

private:
    std::vector<Block> blocks_;
};

/// "{A,C}{D,E}" notation. Singleton blocks are implied and omitted unless no
/// block is shared, in which case every block is printed.
inline std::string format_config(const SharingConfig& cfg, const Soc& soc) {
    const bool any_shared = std::any_of(cfg.blocks().begin(), cfg.blocks().end(),
                                        [](const auto& b) { return b.size() > 1; });
    std::vector<const SharingConfig::Block*> shown;
    for (const auto& b : cfg.blocks())
        if (!any_shared || b.size() > 1) shown.push_back(&b);
    // larger shared blocks first, as in the published tables
    std::stable_sort(shown.begin(), shown.end(),
                     [](const auto* x, const auto* y) { return x->size() > y->size(); });
    std::string out;
    for (const auto* b : shown) {
        out += '{';
        for (std::size_t k = 0; k < b->size(); ++k) {
            if (k) out += ',';
            out += soc.analog_cores[(*b)[k]].id;
        }
        out += '}';
    }
    return out;
}

/// Parses "{A,C}{D,E}"; unlisted cores become singletons. Whitespace ignored.
inline SharingConfig parse_config(const std::string& text, const Soc& soc) {
    const auto n = soc.analog_cores.size();
    std::vector<SharingConfig::Block> blocks;
    std::vector<bool> used(n, false);
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != '{') throw Error("config: expected '{' at offset " + std::to_string(pos));
        const auto close = text.find('}', pos);
        if (close == std::string::npos) throw Error("config: unterminated block");
        SharingConfig::Block block;
        std::string body = text.substr(pos + 1, close - pos - 1);
        std::size_t start = 0;
        while (start <= body.size()) {
            auto comma = body.find(',', start);
            if (comma == std::string::npos) comma = body.size();
            std::string id = body.substr(start, comma - start);
            id.erase(std::remove_if(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c); }),
                     id.end());
            if (id.empty()) throw Error("config: empty core id");
            auto idx = soc.analog_index(id);
            if (!idx) throw Error("config: unknown analog core " + id);
            if (used[*idx]) throw Error("config: core " + id + " listed twice");
            used[*idx] = true;
            block.push_back(*idx);
            start = comma + 1;
        }
        blocks.push_back(std::move(block));
        pos = close + 1;
        skip_ws();
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) blocks.push_back({i});
    return SharingConfig(std::move(blocks), n);
}

enum class TestKind { digital, analog };

struct ScheduledTest {
    std::string core_id;
    TestKind kind = TestKind::digital;
    std::size_t test_index = 0;  // analog: index into the core's test list
    Cycles start = 0;
    Cycles duration = 1;
    Wires width = 1;

    Cycles end() const { return start + duration; }
    bool operator==(const ScheduledTest&) const = default;
};

struct Schedule {
    Wires tam_width = 0;
    std::vector<ScheduledTest> items;

    Cycles makespan() const {
        Cycles m = 0;
        for (const auto& it : items) m = std::max(m, it.end());
        return m;
    }
    bool operator==(const Schedule&) const = default;
};

/// Cost weights; the two must sum to one.
class Weights {
public:
    Weights(double omega_t, double omega_a) : t_(omega_t), a_(omega_a) {
        if (t_ < 0.0 || a_ < 0.0 || std::abs(t_ + a_ - 1.0) > kWeightTolerance)
            throw Error("cost weights must be non-negative and sum to 1");
    }
    double time() const { return t_; }
    double area() const { return a_; }

private:
    double t_;
    double a_;
};

struct CostReport {
    Wires tam_width = 0;
    double omega_t = 0.0;
    double omega_a = 0.0;
    double c_t = 0.0;
    double c_a = 0.0;
    double cost = 0.0;
    Cycles t_of_w = 0;
    Cycles t_m_of_w = 0;
    std::size_t eta = 0;
    SharingConfig config;
};

}  // namespace mstestplan

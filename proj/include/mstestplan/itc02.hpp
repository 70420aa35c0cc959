#pragma once

// Readers and writers for the two input formats:
//
//  * a flat subset of the ITC'02 SOC benchmark format for digital cores.
//    Per module the statements Inputs, Outputs, Bidirs, ScanChains
//    ("ScanChains <k> [:] <len_1> ... <len_k>") and TestPatterns (alias
//    Patterns) are consumed. Level, Socket, TotalTests, Test, ScanUse and
//    TamUse are accepted but ignored with a warning. A module declaring
//    "TotalTests 0" is the SOC top level and is skipped.
//
//  * a line-oriented analog test menu:
//      core <id> [area <A_j>]
//      test <name> <f_min> <f_max> <f_s> <T> <w> [res=<bits>]
//    Frequencies take an optional k/M/G multiplier and optional "Hz"; DC is 0 Hz.
//
// Both parsers are total: every input yields cores plus diagnostics.

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mstestplan/model.hpp"

namespace mstestplan {

enum class Severity { error, warning };

struct ParseDiagnostic {
    std::string file;
    std::size_t line = 1;
    Severity severity = Severity::error;
    std::string message;
};

inline std::string to_string(const ParseDiagnostic& d) {
    return d.file + ":" + std::to_string(d.line) + ": " +
           (d.severity == Severity::error ? "error: " : "warning: ") + d.message;
}

template <class T>
struct ParseResult {
    std::vector<T> cores;
    std::vector<ParseDiagnostic> diagnostics;
    std::string soc_name;

    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.severity == Severity::error) return false;
        return true;
    }
};

namespace detail {

struct Token {
    std::string text;
    std::size_t line;
};

inline std::vector<Token> tokenize(std::istream& in) {
    std::vector<Token> tokens;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (auto slashes = line.find("//"); slashes != std::string::npos) line.erase(slashes);
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) tokens.push_back({cur, lineno});
            cur.clear();
        };
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else if (c == ':') {
                flush();
                tokens.push_back({":", lineno});
            } else {
                cur += c;
            }
        }
        flush();
    }
    return tokens;
}

inline std::vector<std::vector<std::string>> split_lines(std::istream& in, std::vector<std::size_t>& linenos) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::vector<std::string> fields;
        for (std::string f; ss >> f;) fields.push_back(f);
        if (fields.empty()) continue;
        rows.push_back(std::move(fields));
        linenos.push_back(lineno);
    }
    return rows;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline bool is_number(std::string_view s) {
    return !s.empty() && std::isdigit(static_cast<unsigned char>(s.front()));
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace detail

/// "50kHz", "1.5MHz", "10000", "8M", "DC" -> Hz.
inline std::optional<double> parse_frequency(std::string_view s) {
    if (detail::iequals(s, "DC")) return 0.0;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p == s.data()) return std::nullopt;
    std::string_view suffix(p, static_cast<std::size_t>(s.data() + s.size() - p));
    double scale = 1.0;
    if (!suffix.empty()) {
        switch (suffix.front()) {
            case 'k': case 'K': scale = 1e3; suffix.remove_prefix(1); break;
            case 'M': scale = 1e6; suffix.remove_prefix(1); break;
            case 'G': scale = 1e9; suffix.remove_prefix(1); break;
            default: break;
        }
    }
    if (!suffix.empty() && !detail::iequals(suffix, "Hz")) return std::nullopt;
    if (v < 0.0) return std::nullopt;
    return v * scale;
}

inline ParseResult<DigitalCore> parse_digital(std::istream& in, const std::string& file = "<digital>") {
    ParseResult<DigitalCore> result;
    const auto tokens = detail::tokenize(in);
    auto diag = [&](std::size_t line, Severity sev, std::string msg) {
        result.diagnostics.push_back({file, line, sev, std::move(msg)});
    };

    struct Pending {
        DigitalCore core;
        std::size_t line = 0;
        bool has_patterns = false;
        bool no_tests = false;
        bool bad = false;
        int pattern_statements = 0;
    };
    std::optional<Pending> cur;
    std::set<std::string> ids;

    auto finish = [&] {
        if (!cur) return;
        auto p = std::move(*cur);
        cur.reset();
        if (p.bad) return;
        if (p.no_tests && !p.has_patterns) {
            diag(p.line, Severity::warning, "module " + p.core.id + " declares no tests; skipped as top level");
            return;
        }
        if (!p.has_patterns) {
            diag(p.line, Severity::error, "module " + p.core.id + ": missing mandatory TestPatterns");
            return;
        }
        if (p.pattern_statements > 1)
            diag(p.line, Severity::warning, "module " + p.core.id + ": pattern counts of multiple tests summed");
        try {
            validate(p.core);
        } catch (const Error& e) {
            diag(p.line, Severity::error, e.what());
            return;
        }
        result.cores.push_back(std::move(p.core));
    };

    std::size_t i = 0;
    // Reads one unsigned argument after the keyword at tokens[i].
    auto read_count = [&](const detail::Token& kw, std::uint64_t& out) -> bool {
        if (i + 1 >= tokens.size() || !detail::is_number(tokens[i + 1].text)) {
            diag(kw.line, Severity::error, kw.text + ": missing numeric value");
            ++i;
            return false;
        }
        auto v = detail::parse_u64(tokens[i + 1].text);
        i += 2;
        if (!v) {
            diag(kw.line, Severity::error, kw.text + ": malformed numeric field '" + tokens[i - 1].text + "'");
            return false;
        }
        out = *v;
        return true;
    };
    auto skip_args = [&] {
        ++i;
        while (i < tokens.size() && (detail::is_number(tokens[i].text) || tokens[i].text == ":")) ++i;
    };

    while (i < tokens.size()) {
        const auto& tok = tokens[i];
        const auto& kw = tok.text;
        if (kw == "SocName") {
            if (i + 1 < tokens.size()) result.soc_name = tokens[i + 1].text;
            i += 2;
        } else if (kw == "TotalModules") {
            skip_args();
        } else if (kw == "Options") {
            // rest of the line
            const auto line = tok.line;
            while (i < tokens.size() && tokens[i].line == line) ++i;
        } else if (kw == "Module") {
            finish();
            if (i + 1 >= tokens.size()) {
                diag(tok.line, Severity::error, "Module: missing id");
                ++i;
                continue;
            }
            Pending p;
            p.core.id = tokens[i + 1].text;
            p.core.patterns = 0;
            p.line = tok.line;
            if (!ids.insert(p.core.id).second) {
                diag(tok.line, Severity::error, "duplicate module id " + p.core.id);
                p.bad = true;
            }
            cur = std::move(p);
            i += 2;
        } else if (!cur) {
            diag(tok.line, Severity::warning, "statement '" + kw + "' outside a module ignored");
            skip_args();
        } else if (kw == "Inputs" || kw == "Outputs" || kw == "Bidirs") {
            std::uint64_t v = 0;
            if (!read_count(tok, v)) {
                cur->bad = true;
                continue;
            }
            (kw == "Inputs" ? cur->core.inputs : kw == "Outputs" ? cur->core.outputs : cur->core.bidirs) = v;
        } else if (kw == "TestPatterns" || kw == "Patterns") {
            std::uint64_t v = 0;
            if (!read_count(tok, v)) {
                cur->bad = true;
                continue;
            }
            cur->core.patterns += v;
            cur->has_patterns = true;
            ++cur->pattern_statements;
        } else if (kw == "ScanChains") {
            std::uint64_t count = 0;
            if (!read_count(tok, count)) {
                cur->bad = true;
                continue;
            }
            if (i < tokens.size() && tokens[i].text == ":") ++i;
            std::vector<std::uint64_t> lengths;
            while (lengths.size() < count && i < tokens.size() && detail::is_number(tokens[i].text)) {
                auto v = detail::parse_u64(tokens[i].text);
                if (!v) {
                    diag(tokens[i].line, Severity::error, "ScanChains: malformed length '" + tokens[i].text + "'");
                    cur->bad = true;
                    break;
                }
                lengths.push_back(*v);
                ++i;
            }
            if (lengths.size() != count && !cur->bad) {
                diag(tok.line, Severity::error,
                     "ScanChains: expected " + std::to_string(count) + " lengths, found " +
                         std::to_string(lengths.size()));
                cur->bad = true;
            }
            cur->core.scan_chains = std::move(lengths);
        } else if (kw == "TotalTests") {
            std::uint64_t v = 0;
            if (read_count(tok, v) && v == 0) cur->no_tests = true;
        } else if (kw == "Level" || kw == "Socket" || kw == "Test" || kw == "ScanUse" || kw == "TamUse") {
            diag(tok.line, Severity::warning, "statement '" + kw + "' ignored (flat scheduling)");
            skip_args();
        } else {
            diag(tok.line, Severity::warning, "unknown statement '" + kw + "' skipped");
            skip_args();
        }
    }
    finish();
    return result;
}

inline ParseResult<AnalogCore> parse_analog(std::istream& in, const std::string& file = "<analog>") {
    ParseResult<AnalogCore> result;
    std::vector<std::size_t> linenos;
    const auto rows = detail::split_lines(in, linenos);
    auto diag = [&](std::size_t line, Severity sev, std::string msg) {
        result.diagnostics.push_back({file, line, sev, std::move(msg)});
    };

    std::set<std::string> ids;
    std::optional<AnalogCore> cur;
    std::size_t cur_line = 0;
    bool cur_bad = false;

    auto finish = [&] {
        if (!cur) return;
        if (!cur_bad) {
            if (cur->tests.empty())
                diag(cur_line, Severity::error, "core " + cur->id + " has no tests");
            else
                result.cores.push_back(std::move(*cur));
        }
        cur.reset();
    };

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& f = rows[r];
        const auto line = linenos[r];
        if (f[0] == "core") {
            finish();
            cur_bad = false;
            cur_line = line;
            if (f.size() != 2 && !(f.size() == 4 && f[2] == "area")) {
                diag(line, Severity::error, "expected 'core <id> [area <A>]'");
                cur = AnalogCore{};
                cur_bad = true;
                continue;
            }
            cur = AnalogCore{f[1], {}, 1.0};
            if (!ids.insert(f[1]).second) {
                diag(line, Severity::error, "duplicate core id " + f[1]);
                cur_bad = true;
            }
            if (f.size() == 4) {
                double a = 0.0;
                auto [p, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), a);
                if (ec != std::errc{} || p != f[3].data() + f[3].size() || !(a > 0.0)) {
                    diag(line, Severity::error, "core " + f[1] + ": area must be a positive number");
                    cur_bad = true;
                } else {
                    cur->wrapper_area = a;
                }
            }
        } else if (f[0] == "test") {
            if (!cur) {
                diag(line, Severity::error, "test row before any core header");
                continue;
            }
            if (f.size() != 7 && f.size() != 8) {
                diag(line, Severity::error, "expected 'test <name> <f_min> <f_max> <f_s> <T> <w> [res=<bits>]'");
                cur_bad = true;
                continue;
            }
            AnalogTest t;
            t.name = f[1];
            auto fmin = parse_frequency(f[2]);
            auto fmax = parse_frequency(f[3]);
            auto fs = parse_frequency(f[4]);
            auto len = detail::parse_u64(f[5]);
            auto w = detail::parse_u64(f[6]);
            bool ok = true;
            if (!fmin || !fmax || !fs) {
                diag(line, Severity::error, "test " + t.name + ": malformed frequency");
                ok = false;
            }
            if (!len || *len == 0) {
                diag(line, Severity::error, "test " + t.name + ": test length must be a positive integer");
                ok = false;
            }
            if (!w || *w == 0 || *w > UINT32_MAX) {
                diag(line, Severity::error, "test " + t.name + ": TAM width must be a positive integer");
                ok = false;
            }
            if (f.size() == 8) {
                auto res = f[7].rfind("res=", 0) == 0 ? detail::parse_u64(std::string_view(f[7]).substr(4))
                                                       : std::nullopt;
                if (!res || *res == 0 || *res > 64) {
                    diag(line, Severity::error, "test " + t.name + ": expected res=<bits>");
                    ok = false;
                } else {
                    t.resolution_bits = static_cast<unsigned>(*res);
                }
            }
            if (ok) {
                t.f_min = *fmin;
                t.f_max = *fmax;
                t.f_s = *fs;
                t.length_cycles = *len;
                t.tam_width = static_cast<Wires>(*w);
                if (t.f_min > t.f_max) {
                    diag(line, Severity::error, "test " + t.name + ": f_min exceeds f_max");
                    ok = false;
                } else if (!(t.f_s > 0.0)) {
                    diag(line, Severity::error, "test " + t.name + ": sampling frequency must be positive");
                    ok = false;
                }
            }
            if (!ok) {
                cur_bad = true;
                continue;
            }
            cur->tests.push_back(std::move(t));
        } else {
            diag(line, Severity::error, "unknown directive '" + f[0] + "'");
        }
    }
    finish();
    return result;
}

inline ParseResult<DigitalCore> parse_digital(const std::string& text, const std::string& file = "<digital>") {
    std::istringstream in(text);
    return parse_digital(in, file);
}

inline ParseResult<AnalogCore> parse_analog(const std::string& text, const std::string& file = "<analog>") {
    std::istringstream in(text);
    return parse_analog(in, file);
}

inline std::string serialize_digital(const std::vector<DigitalCore>& cores, const std::string& soc_name = "") {
    std::ostringstream out;
    if (!soc_name.empty()) out << "SocName " << soc_name << "\n";
    for (const auto& c : cores) {
        out << "Module " << c.id << "\n";
        out << "  Inputs " << c.inputs << " Outputs " << c.outputs << " Bidirs " << c.bidirs << "\n";
        out << "  ScanChains " << c.scan_chains.size();
        if (!c.scan_chains.empty()) {
            out << " :";
            for (auto l : c.scan_chains) out << ' ' << l;
        }
        out << "\n  TestPatterns " << c.patterns << "\n";
    }
    return out.str();
}

inline std::string serialize_analog(const std::vector<AnalogCore>& cores) {
    std::ostringstream out;
    auto freq = [](double hz) { return hz == 0.0 ? std::string("DC") : detail::format_double(hz); };
    for (const auto& c : cores) {
        out << "core " << c.id << " area " << detail::format_double(c.wrapper_area) << "\n";
        for (const auto& t : c.tests)
            out << "test " << t.name << ' ' << freq(t.f_min) << ' ' << freq(t.f_max) << ' ' << freq(t.f_s) << ' '
                << t.length_cycles << ' ' << t.tam_width << " res=" << t.resolution_bits << "\n";
    }
    return out.str();
}

}  // namespace mstestplan

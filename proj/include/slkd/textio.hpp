#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "slkd/common.hpp"

namespace slkd {

// shortest float form that parses back bit-exact (9 significant digits)
inline std::string fmt_f32(float v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
    return buf;
}

// shortest double form that parses back bit-exact (17 significant digits)
inline std::string fmt_f64(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// LF-separated lines; a trailing newline does not produce an empty last line
inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline long long parse_ll(const std::string& s, const std::string& ctx) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        require(used == s.size() && !s.empty(), ctx + ": bad integer '" + s + "'");
        return v;
    } catch (const error&) {
        throw;
    } catch (...) {
        fail(ctx + ": bad integer '" + s + "'");
    }
}

inline double parse_f64(const std::string& s, const std::string& ctx) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        require(used == s.size() && !s.empty(), ctx + ": bad number '" + s + "'");
        return v;
    } catch (const error&) {
        throw;
    } catch (...) {
        fail(ctx + ": bad number '" + s + "'");
    }
}

} // namespace slkd

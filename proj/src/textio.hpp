#pragma once

// Internal text/CSV helpers shared by file IO and trace writers.

#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include "beamopt/errors.hpp"

namespace beamopt::textio {

// Shortest representation that round-trips a double exactly.
inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return std::string(buf);
}

inline void split_csv(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline double parse_double(const std::string& s, size_t line_no,
                           const char* what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                         " '" + s + "'");
    }
    return v;
}

inline long long parse_int(const std::string& s, size_t line_no,
                           const char* what) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                         " '" + s + "'");
    }
    return v;
}

}  // namespace beamopt::textio

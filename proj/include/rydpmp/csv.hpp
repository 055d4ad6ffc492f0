#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>

namespace rydpmp::csv {

/// 17 significant digits, enough to round-trip a double.
inline std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void row(std::ostream& os, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) os << ',';
        os << format(v);
        first = false;
    }
    os << '\n';
}

}  // namespace rydpmp::csv

#pragma once

#include <cstdio>
#include <string>

namespace critline {

// Shortest decimal form that round-trips a double; deterministic across runs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace critline

#pragma once

#include <cstdio>
#include <string>

namespace ffchain {

/// 17 significant digits, enough to round-trip any double.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace ffchain

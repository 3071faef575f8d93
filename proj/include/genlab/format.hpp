#pragma once

#include <cstdio>
#include <string>

namespace genlab {

// Round-trip-exact decimal rendering; every numeric output channel uses it.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace genlab

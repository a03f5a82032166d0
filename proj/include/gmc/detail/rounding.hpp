#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "gmc/error.hpp"

namespace gmc::detail {

inline constexpr double kIntegerSnap = 1e-9;

/// Ceiling that treats values within a relative 1e-9 of an integer as that
/// integer, so floating-point noise like 4.000000000000001 does not add one.
inline std::int64_t snapped_ceil(double x) {
    if (!(x < 0x1.0p62)) {
        throw Error("sample size exceeds the representable range");
    }
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= kIntegerSnap * std::max(1.0, std::abs(nearest))) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(x));
}

/// Least odd integer >= x, at least 1.
inline std::int64_t least_odd_at_least(double x) {
    std::int64_t n = snapped_ceil(x);
    if (n < 1) {
        return 1;
    }
    return n % 2 == 0 ? n + 1 : n;
}

}  // namespace gmc::detail

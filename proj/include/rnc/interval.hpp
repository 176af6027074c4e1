#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "rnc/errors.hpp"

namespace rnc {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// Closed real interval; either end may be infinite.
struct interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x, double tol = 0.0) const {
        return x >= lo - tol && x <= hi + tol;
    }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double length() const { return hi - lo; }

    // A point strictly inside: midpoint when bounded, finite bound +/- 1
    // when one end is infinite. Doubly infinite intervals never arise in the
    // constructions; 0 is as good a representative as any.
    double representative() const {
        if (bounded()) return 0.5 * (lo + hi);
        if (std::isfinite(lo)) return lo + 1.0;
        if (std::isfinite(hi)) return hi - 1.0;
        return 0.0;
    }
};

inline bool disjoint(const interval& a, const interval& b) {
    return a.hi < b.lo || b.hi < a.lo;
}

// Finite stand-in for grid sampling: infinite ends truncate to [-lim, lim].
// An interval lying entirely beyond the limit collapses to its own finite
// endpoint so sampled points never leave the original interval.
inline interval truncated(const interval& iv, double lim = 10.0) {
    interval t = iv;
    if (!std::isfinite(t.lo)) t.lo = -lim;
    if (!std::isfinite(t.hi)) t.hi = lim;
    if (t.lo > t.hi) {
        const double pin = iv.lo > lim ? iv.lo : iv.hi;
        t = {pin, pin};
    }
    return t;
}

// n uniform points including both endpoints (n >= 2); n == 1 gives lo.
inline std::vector<double> grid_points(const interval& iv, int n) {
    if (n < 1) throw invalid_input_error("grid must be positive");
    const interval t = truncated(iv);
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n));
    if (n == 1 || t.lo == t.hi) {
        pts.push_back(t.lo);
        return pts;
    }
    for (int i = 0; i < n; ++i)
        pts.push_back(t.lo + (t.hi - t.lo) * i / (n - 1));
    return pts;
}

}  // namespace rnc

#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace vng {

using Vec = std::vector<double>;

inline double sum(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// l1 norm of a nonnegative vector; the wealth |x| of a portfolio.
inline double wealth(std::span<const double> v) { return sum(v); }

inline Vec scaled(std::span<const double> v, double t) {
    Vec out(v.begin(), v.end());
    for (double& x : out) x *= t;
    return out;
}

}  // namespace vng

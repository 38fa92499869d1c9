#pragma once

// Shared fixtures and independent oracles for the test suite. Oracles here
// avoid the library's LP and solver code paths on purpose.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "vng/cone_table.hpp"
#include "vng/markov.hpp"
#include "vng/rng.hpp"
#include "vng/scenario_tree.hpp"

namespace vt {

using vng::ConeSpec;
using vng::ConeTable;
using vng::MarkovSpec;
using vng::Vec;

inline constexpr double kKellyGrowth = 0.058891517828191825;  // (1/2) ln(9/8)

/// Two assets, riskless return 1, risky return 2 (state U) or 1/2 (state D),
/// i.i.d. with probability 1/2.
inline MarkovSpec kelly_chain() { return MarkovSpec::iid({"U", "D"}, {0.5, 0.5}); }

inline ConeTable kelly_table(double lambda = 0.0) {
    ConeTable t;
    if (lambda == 0.0) {
        t.set("*->U", ConeSpec::frictionless({1.0, 2.0}));
        t.set("*->D", ConeSpec::frictionless({1.0, 0.5}));
    } else {
        t.set("*->U", ConeSpec::proportional_tc({1.0, 2.0}, {lambda, lambda}, {lambda, lambda}));
        t.set("*->D", ConeSpec::proportional_tc({1.0, 0.5}, {lambda, lambda}, {lambda, lambda}));
    }
    return t;
}

/// Largest t in [0, hi] with pred(t) true, assuming pred is monotone.
inline double bisect(const std::function<bool(double)>& pred, double hi, int steps = 200) {
    double lo = 0.0;
    if (!pred(lo)) return 0.0;
    while (pred(hi)) hi *= 2.0;
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Proportional-cost membership by direct trade accounting: buying costs
/// (1 + l+) per unit, selling yields (1 - l-) per unit.
inline bool tc_member(const Vec& R, const Vec& lp, const Vec& lm, const Vec& a, const Vec& b, double tol = 1e-12) {
    double cash = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double held = R[i] * a[i];
        if (b[i] > held) cash -= (1.0 + lp[i]) * (b[i] - held);
        else cash += (1.0 - lm[i]) * (held - b[i]);
    }
    return cash >= -tol;
}

/// Two-currency membership by brute force over the converted fractions of
/// each currency on a grid of the given resolution.
inline bool currency2_member_grid(const std::vector<Vec>& mu, const Vec& a, const Vec& b, double h) {
    const int steps = static_cast<int>(std::round(1.0 / h));
    for (int i = 0; i <= steps; ++i) {
        const double f0 = i * h;
        for (int j = 0; j <= steps; ++j) {
            const double f1 = j * h;
            const double b0 = (1.0 - f0) * a[0] + mu[0][1] * f1 * a[1];
            const double b1 = (1.0 - f1) * a[1] + mu[1][0] * f0 * a[0];
            if (b[0] <= b0 + 1e-12 && b[1] <= b1 + 1e-12) return true;
        }
    }
    return false;
}

/// Growth rate of the Kelly model for a risky fraction w, frictionless.
inline double kelly_rate(double w) { return 0.5 * std::log(1.0 + w) + 0.5 * std::log(1.0 - 0.5 * w); }

/// Grid maximum of kelly_rate over w in [0, 1].
inline std::pair<double, double> kelly_grid(double h) {
    double best = -1.0, arg = 0.0;
    const int steps = static_cast<int>(std::round(1.0 / h));
    for (int k = 0; k <= steps; ++k) {
        const double w = static_cast<double>(k) / steps;
        if (kelly_rate(w) > best) best = kelly_rate(w), arg = w;
    }
    return {arg, best};
}

inline Vec random_simplex(vng::CounterRng& rng, std::size_t n) {
    Vec x(n);
    double s = 0.0;
    for (double& v : x) s += (v = rng.exponential());
    for (double& v : x) v /= s;
    return x;
}

inline Vec random_box(vng::CounterRng& rng, std::size_t n, double hi = 1.0) {
    Vec x(n);
    for (double& v : x) v = hi * rng.uniform();
    return x;
}

/// Random cones of each family with n assets and moderate parameters.
inline ConeSpec random_frictionless(vng::CounterRng& rng, std::size_t n) {
    Vec R(n);
    for (double& r : R) r = 0.5 + 1.5 * rng.uniform();
    return ConeSpec::frictionless(R);
}

inline ConeSpec random_tc(vng::CounterRng& rng, std::size_t n) {
    Vec R(n), lp(n), lm(n);
    for (std::size_t i = 0; i < n; ++i) {
        R[i] = 0.5 + 1.5 * rng.uniform();
        lp[i] = 0.1 * rng.uniform();
        lm[i] = 0.1 * rng.uniform();
    }
    return ConeSpec::proportional_tc(R, lp, lm);
}

inline ConeSpec random_currency(vng::CounterRng& rng, std::size_t n) {
    std::vector<Vec> mu(n, Vec(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) mu[i][j] = 0.5 + rng.uniform();
    return ConeSpec::currency(mu);
}

inline std::shared_ptr<const vng::ScenarioTree> tree_of(const MarkovSpec& spec, std::size_t horizon) {
    return std::make_shared<const vng::ScenarioTree>(vng::ScenarioTree::build(spec, horizon));
}

}  // namespace vt

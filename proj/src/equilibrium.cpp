#include "vng/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vng/error.hpp"
#include "vng/lp.hpp"
#include "vng/parallel.hpp"
#include "vng/rng.hpp"
#include "vng/validation.hpp"

namespace vng {
namespace {

using Point = std::vector<Vec>;

const ConeSpec& transition_cone(const MarkovSpec& spec, const ConeTable& table, std::size_t u, std::size_t v) {
    return table.resolve(std::string_view(spec.states[u]), spec.states[v]);
}

struct Objective {
    const MarkovSpec& spec;
    const ConeTable& table;
    const Vec& pi;

    double operator()(const Point& x) const { return balanced_log_growth(x, pi, spec, table); }
};

// Pattern search over per-state simplices. Poll directions: mass transfers
// between two assets in one state, the same transfer in every state at once
// (moves along ridges created by the min over predecessors), and a few random
// zero-sum directions.
Point pattern_search(Point x, const Objective& f, CounterRng& rng) {
    const std::size_t k = x.size();
    const std::size_t n = x.front().size();
    double fx = f(x);
    double step = 0.25;

    auto try_point = [&](Point& cand) {
        const double fc = f(cand);
        if (fc > fx) {
            x = std::move(cand);
            fx = fc;
            return true;
        }
        return false;
    };

    while (step > 1e-11) {
        bool improved = false;
        for (std::size_t i = 0; i < n && !improved; ++i) {
            for (std::size_t j = 0; j < n && !improved; ++j) {
                if (i == j) continue;
                for (std::size_t s = 0; s <= k && !improved; ++s) {
                    Point cand = x;
                    bool moved = false;
                    for (std::size_t r = 0; r < k; ++r) {
                        if (s < k && r != s) continue;  // s == k: all states
                        const double amount = std::min(step, cand[r][i]);
                        if (amount <= 0.0) continue;
                        cand[r][i] -= amount;
                        cand[r][j] += amount;
                        moved = true;
                    }
                    if (moved) improved = try_point(cand);
                }
            }
        }
        for (int trial = 0; trial < 4 && !improved; ++trial) {
            Point dir(k, Vec(n, 0.0));
            double norm = 0.0;
            for (auto& d : dir) {
                double mean = 0.0;
                for (double& v : d) mean += (v = rng.uniform() - 0.5);
                mean /= static_cast<double>(n);
                for (double& v : d) {
                    v -= mean;
                    norm = std::max(norm, std::abs(v));
                }
            }
            if (!(norm > 0.0)) continue;
            double t = step / norm;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t i = 0; i < n; ++i)
                    if (dir[r][i] < 0.0) t = std::min(t, -x[r][i] / dir[r][i]);
            if (!(t > 0.0)) continue;
            Point cand = x;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t i = 0; i < n; ++i) cand[r][i] = std::max(0.0, cand[r][i] + t * dir[r][i]);
            improved = try_point(cand);
        }
        if (improved) step = std::min(0.5, step * 2.0);
        else step *= 0.5;
    }
    for (auto& row : x) {
        const double s = sum(row);
        for (double& v : row) v /= s;
    }
    return x;
}

Point start_point(std::size_t index, std::size_t k, std::size_t n, std::uint64_t seed) {
    if (index == 0) return Point(k, Vec(n, 1.0 / static_cast<double>(n)));
    if (index <= n) {
        Vec e(n, 0.0);
        e[index - 1] = 1.0;
        return Point(k, e);
    }
    CounterRng rng(seed, index);
    Point x(k, Vec(n));
    for (auto& row : x) {
        for (double& v : row) v = rng.exponential();
        const double s = sum(row);
        for (double& v : row) v /= s;
    }
    return x;
}

}  // namespace

std::vector<std::size_t> predecessors(const MarkovSpec& spec, std::size_t v) {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < spec.size(); ++u)
        if (spec.transition[u][v] > 0.0) out.push_back(u);
    if (out.empty())
        for (std::size_t u = 0; u < spec.size(); ++u) out.push_back(u);
    return out;
}

Vec balanced_growth(const std::vector<Vec>& x, const MarkovSpec& spec, const ConeTable& table) {
    if (x.size() != spec.size()) throw DimensionError("balanced_growth: one portfolio per state required");
    Vec alpha(spec.size(), std::numeric_limits<double>::infinity());
    for (std::size_t v = 0; v < spec.size(); ++v)
        for (std::size_t u : predecessors(spec, v))
            alpha[v] = std::min(alpha[v], max_growth(transition_cone(spec, table, u, v), x[u], x[v]));
    return alpha;
}

double balanced_log_growth(const std::vector<Vec>& x, const Vec& pi, const MarkovSpec& spec,
                           const ConeTable& table) {
    const Vec alpha = balanced_growth(x, spec, table);
    double g = 0.0;
    for (std::size_t v = 0; v < spec.size(); ++v) {
        if (pi[v] <= 0.0) continue;
        if (!(alpha[v] > 0.0)) return -std::numeric_limits<double>::infinity();
        g += pi[v] * std::log(alpha[v]);
    }
    return g;
}

EquilibriumResult solve_stationary_equilibrium(const MarkovSpec& spec, const ConeTable& table,
                                               const EquilibriumOptions& options) {
    spec.validate();
    const std::size_t k = spec.size();
    const std::size_t n = table.n();
    for (std::size_t v = 0; v < k; ++v)
        for (std::size_t u : predecessors(spec, v))
            if (unit_growth(transition_cone(spec, table, u, v)) <= kGammaFloor)
                throw DomainError("solve_stationary_equilibrium: no positive growth factor (G5 fails for " +
                                  spec.states[u] + "->" + spec.states[v] + ")");

    EquilibriumResult res;
    res.stationary = spec.stationary_distribution();
    const Objective f{spec, table, res.stationary};

    const std::size_t starts = std::max<std::size_t>(1, options.starts);
    std::vector<Point> found(starts);
    std::vector<double> value(starts, -std::numeric_limits<double>::infinity());
    parallel_for(
        starts,
        [&](std::size_t i) {
            CounterRng rng(options.seed, starts + i);
            found[i] = pattern_search(start_point(i, k, n, options.seed), f, rng);
            value[i] = f(found[i]);
        },
        options.threads ? options.threads : thread_limit());

    std::size_t best = 0;
    for (std::size_t i = 1; i < starts; ++i)
        if (value[i] > value[best]) best = i;
    if (!std::isfinite(value[best]))
        throw SolverError("solve_stationary_equilibrium: every start collapsed to zero growth", value[best]);

    res.strategy.x = found[best];
    res.strategy.alpha = balanced_growth(res.strategy.x, spec, table);
    res.log_growth = f(res.strategy.x);

    const PriceExtraction pe = extract_equilibrium_prices(res.strategy, spec, table, options.price_tolerance);
    res.prices = pe.prices;
    res.certificate_residual = pe.residual;
    res.prices_feasible = pe.feasible;
    return res;
}

double equilibrium_price_residual(const BalancedStrategy& strategy, const std::vector<Vec>& prices,
                                  const MarkovSpec& spec, const ConeTable& table) {
    const std::size_t k = spec.size();
    const std::size_t n = table.n();
    if (prices.size() != k) throw DimensionError("equilibrium_price_residual: one price vector per state required");
    double worst = 0.0;
    for (std::size_t v = 0; v < k; ++v) {
        Vec d(n, 0.0);
        for (std::size_t w = 0; w < k; ++w)
            for (std::size_t i = 0; i < n; ++i) d[i] += spec.transition[v][w] * prices[w][i] / strategy.alpha[v];
        for (std::size_t u : predecessors(spec, v)) {
            worst = std::max(worst, std::abs(dot(prices[v], strategy.x[u]) - 1.0));
            worst = std::max(worst, normalized_dual_residual(transition_cone(spec, table, u, v), prices[v], d));
        }
    }
    return worst;
}

PriceExtraction extract_equilibrium_prices(const BalancedStrategy& strategy, const MarkovSpec& spec,
                                           const ConeTable& table, double tolerance) {
    spec.validate();
    const std::size_t k = spec.size();
    const std::size_t n = table.n();
    strategy.check(k, n);

    struct Edge {
        std::size_t u, v, y;
        const LiftedCone* lc;
    };
    std::vector<Edge> edges;
    std::size_t cols = k * n;
    for (std::size_t v = 0; v < k; ++v)
        for (std::size_t u : predecessors(spec, v)) {
            const LiftedCone& lc = transition_cone(spec, table, u, v).lifted();
            edges.push_back({u, v, cols, &lc});
            cols += lc.rows.size();
        }
    const std::size_t t = cols++;

    lp::Problem p;
    p.objective.assign(cols, 0.0);
    p.objective[t] = -1.0;
    for (const Edge& e : edges) {
        const LiftedCone& lc = *e.lc;
        const std::size_t m = lc.rows.size();
        Vec up(cols, 0.0), lo(cols, 0.0);  // |p(v).x(u) - 1| <= t
        for (std::size_t i = 0; i < n; ++i) up[e.v * n + i] = lo[e.v * n + i] = strategy.x[e.u][i];
        up[t] = -1.0;
        lo[t] = 1.0;
        p.add(std::move(up), lp::Relation::LessEqual, 1.0);
        p.add(std::move(lo), lp::Relation::GreaterEqual, 1.0);
        for (std::size_t i = 0; i < n; ++i) {  // p(v)_i + sum_r A_a[r][i] y_r >= 0
            Vec row(cols, 0.0);
            row[e.v * n + i] = 1.0;
            for (std::size_t r = 0; r < m; ++r) row[e.y + r] = lc.rows[r][i];
            p.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {  // sum_r A_b[r][i] y_r - d_i + t >= 0
            Vec row(cols, 0.0);
            for (std::size_t r = 0; r < m; ++r) row[e.y + r] = lc.rows[r][n + i];
            for (std::size_t w = 0; w < k; ++w) row[w * n + i] -= spec.transition[e.v][w] / strategy.alpha[e.v];
            row[t] = 1.0;
            p.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
        }
        for (std::size_t j = 0; j < lc.aux; ++j) {  // sum_r A_z[r][j] y_r >= 0
            Vec row(cols, 0.0);
            for (std::size_t r = 0; r < m; ++r) row[e.y + r] = lc.rows[r][2 * n + j];
            p.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
        }
    }
    const auto sol = lp::solve(p);

    PriceExtraction out;
    out.prices.assign(k, Vec(n, 0.0));
    for (std::size_t v = 0; v < k; ++v)
        for (std::size_t i = 0; i < n; ++i) out.prices[v][i] = sol.x[v * n + i];
    out.residual = equilibrium_price_residual(strategy, out.prices, spec, table);
    out.feasible = out.residual <= tolerance;
    return out;
}

}  // namespace vng

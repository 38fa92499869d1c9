#pragma once

#include <cstdint>
#include <vector>

#include "vng/cone_table.hpp"
#include "vng/markov.hpp"
#include "vng/plans.hpp"

namespace vng {

struct EquilibriumOptions {
    std::size_t starts = 32;
    std::uint64_t seed = 20240601;
    /// Largest residual at which supporting prices count as found.
    double price_tolerance = 1e-6;
    /// Worker threads for the multistart; 0 means thread_limit().
    std::size_t threads = 0;
};

struct PriceExtraction {
    std::vector<Vec> prices;  // per state
    double residual = 0.0;
    bool feasible = false;
};

struct EquilibriumResult {
    BalancedStrategy strategy;
    std::vector<Vec> prices;
    Vec stationary;             // pi used for the growth rate
    double log_growth = 0.0;    // sum_s pi(s) ln alpha(s), nats per period
    double certificate_residual = 0.0;
    bool prices_feasible = false;
};

/// Predecessors u of v with P(u, v) > 0. States without one are treated as
/// reachable from every state.
std::vector<std::size_t> predecessors(const MarkovSpec& spec, std::size_t v);

/// alpha(v) = min over predecessors u of max_growth(G(u,v), x(u), x(v)).
Vec balanced_growth(const std::vector<Vec>& x, const MarkovSpec& spec, const ConeTable& table);

/// sum_v pi(v) ln alpha(v); -infinity when a weighted factor vanishes.
double balanced_log_growth(const std::vector<Vec>& x, const Vec& pi, const MarkovSpec& spec,
                           const ConeTable& table);

/// Multistart pattern search for the proportions maximizing E ln alpha,
/// followed by price extraction.
EquilibriumResult solve_stationary_equilibrium(const MarkovSpec& spec, const ConeTable& table,
                                               const EquilibriumOptions& options = {});

/// Prices p(.) with p(v).x(u) = 1 and (p(v), sum_w P(v,w) p(w) / alpha(v)) in
/// the dual cone of G(u,v) for every positive-probability transition. Solved
/// as one LP that minimizes a uniform relaxation of all constraints; the
/// reported residual is re-measured on the returned prices.
PriceExtraction extract_equilibrium_prices(const BalancedStrategy& strategy, const MarkovSpec& spec,
                                           const ConeTable& table, double tolerance = 1e-6);

/// Largest violation of the stationary dual conditions for given prices:
/// support |p(v).x(u) - 1| and the normalized dual-cone residual.
double equilibrium_price_residual(const BalancedStrategy& strategy, const std::vector<Vec>& prices,
                                  const MarkovSpec& spec, const ConeTable& table);

}  // namespace vng

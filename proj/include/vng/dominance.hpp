#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vng/equilibrium.hpp"

namespace vng {

/// A fixed-proportion competitor y_t = beta_t yhat(s_t). Each step it grows by
/// retain * max_growth(G(s_{t-1}, s_t), yhat(s_{t-1}), yhat(s_t)), or by the
/// equilibrium factor alpha(s_t) when `equilibrium_factors` is set.
struct Competitor {
    std::string name;
    std::vector<Vec> proportions;  // per state, on the simplex
    double retain = 1.0;
    bool equilibrium_factors = false;
};

/// identity (y = x), dispose_10 (0.9 of x each step), all_in_<i> per asset,
/// equal_weight, then `random_count` random proportions drawn from streams
/// 2^40 + r of `seed`.
std::vector<Competitor> default_competitors(const EquilibriumResult& eq, std::size_t random_count,
                                            std::uint64_t seed);

struct DominanceOptions {
    std::size_t random_competitors = 8;
    std::size_t length = 500;  // L
    std::size_t paths = 200;   // N
    std::uint64_t seed = 20240601;
    std::size_t threads = 0;   // 0: thread_limit()
};

struct CompetitorStats {
    std::string name;
    double growth_x_mean = 0.0, growth_x_se = 0.0;  // (1/L) ln|x_L|
    double growth_y_mean = 0.0, growth_y_se = 0.0;  // (1/L) ln|y_L|
    double gap_mean = 0.0, gap_se = 0.0;            // per-path difference of the two
    double max_ratio = 0.0;          // max over paths and t <= L of |y_t| / |x_t|
    double mean_max_ratio = 0.0;     // path average of max_t |y_t| / |x_t|
    double stabilized_fraction = 0.0;  // paths without a new ratio maximum after L/2
};

struct DominanceReport {
    std::size_t paths = 0;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    std::vector<CompetitorStats> competitors;
};

/// Simulates N paths of L transitions with the chain started in its
/// stationary law and compares the balanced strategy against each competitor
/// on the same paths. All statistics are finite-horizon quantities.
DominanceReport asymptotic_dominance(const EquilibriumResult& eq, const MarkovSpec& spec, const ConeTable& table,
                                     const std::vector<Competitor>& competitors,
                                     const DominanceOptions& options = {});

DominanceReport asymptotic_dominance(const EquilibriumResult& eq, const MarkovSpec& spec, const ConeTable& table,
                                     const DominanceOptions& options = {});

/// Header plus one row per competitor.
void write_dominance_csv(std::ostream& out, const DominanceReport& report);

}  // namespace vng

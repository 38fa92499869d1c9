#include "vng/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "vng/error.hpp"
#include "vng/parallel.hpp"
#include "vng/rng.hpp"

namespace vng {
namespace {

constexpr std::uint64_t kCompetitorStreams = std::uint64_t{1} << 40;

struct Moments {
    double mean = 0.0, se = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    const double N = static_cast<double>(v.size());
    for (double x : v) m.mean += x;
    m.mean /= N;
    if (v.size() > 1 && std::isfinite(m.mean)) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.se = std::sqrt(ss / (N - 1.0) / N);
    }
    return m;
}

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<Competitor> default_competitors(const EquilibriumResult& eq, std::size_t random_count,
                                            std::uint64_t seed) {
    const auto& x = eq.strategy.x;
    const std::size_t k = x.size();
    const std::size_t n = x.front().size();
    std::vector<Competitor> out;
    out.push_back({"identity", x, 1.0, true});
    out.push_back({"dispose_10", x, 0.9, true});
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        out.push_back({"all_in_" + std::to_string(i), std::vector<Vec>(k, e), 1.0, false});
    }
    out.push_back({"equal_weight", std::vector<Vec>(k, Vec(n, 1.0 / static_cast<double>(n))), 1.0, false});
    for (std::size_t r = 0; r < random_count; ++r) {
        // Paths use streams 0..N-1 of the same seed; keep clear of them.
        CounterRng rng(seed, kCompetitorStreams + r);
        std::vector<Vec> p(k, Vec(n));
        for (auto& row : p) {
            for (double& v : row) v = rng.exponential();
            const double s = sum(row);
            for (double& v : row) v /= s;
        }
        out.push_back({"random_" + std::to_string(r), std::move(p), 1.0, false});
    }
    return out;
}

DominanceReport asymptotic_dominance(const EquilibriumResult& eq, const MarkovSpec& spec, const ConeTable& table,
                                     const DominanceOptions& options) {
    return asymptotic_dominance(eq, spec, table, default_competitors(eq, options.random_competitors, options.seed),
                                options);
}

DominanceReport asymptotic_dominance(const EquilibriumResult& eq, const MarkovSpec& spec, const ConeTable& table,
                                     const std::vector<Competitor>& competitors, const DominanceOptions& options) {
    if (options.length < 1 || options.paths < 1) throw DomainError("asymptotic_dominance: L and N must be positive");
    const std::size_t k = spec.size();
    const std::size_t n = table.n();
    eq.strategy.check(k, n);
    for (const auto& c : competitors)
        if (c.proportions.size() != k) throw DimensionError("asymptotic_dominance: competitor " + c.name + " misses states");

    // Log growth factor of every competitor on every transition u -> v.
    const std::size_t C = competitors.size();
    std::vector<std::vector<double>> step(C, std::vector<double>(k * k, 0.0));
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t u = 0; u < k; ++u)
            for (std::size_t v = 0; v < k; ++v) {
                const auto& comp = competitors[c];
                double g;
                if (comp.equilibrium_factors) {
                    g = eq.strategy.alpha[v];
                } else {
                    const ConeSpec& cone = table.resolve(std::string_view(spec.states[u]), spec.states[v]);
                    g = max_growth(cone, comp.proportions[u], comp.proportions[v]);
                }
                g *= comp.retain;
                step[c][u * k + v] = g > 0.0 ? std::log(g) : -std::numeric_limits<double>::infinity();
            }

    MarkovSpec chain = spec;
    chain.initial = eq.stationary.empty() ? spec.stationary_distribution() : eq.stationary;
    const auto paths = sample_paths(chain, options.length + 1, options.paths, options.seed);
    const double L = static_cast<double>(options.length);

    // Per path and competitor: growth rates, log of the max ratio and whether
    // the running maximum settled in the first half.
    struct PathStat {
        double gx = 0.0, gy = 0.0, log_max = 0.0;
        bool stable = true;
    };
    std::vector<std::vector<PathStat>> stats(options.paths, std::vector<PathStat>(C));
    parallel_for(
        options.paths,
        [&](std::size_t p) {
            const auto& s = paths[p];
            for (std::size_t c = 0; c < C; ++c) {
                double lx = 0.0, ly = 0.0, best = 0.0;
                std::size_t best_at = 0;
                for (std::size_t t = 1; t <= options.length; ++t) {
                    lx += std::log(eq.strategy.alpha[s[t]]);
                    ly += step[c][s[t - 1] * k + s[t]];
                    const double r = ly - lx;
                    if (r > best + 1e-12) {
                        best = r;
                        best_at = t;
                    }
                }
                PathStat& st = stats[p][c];
                st.gx = lx / L;
                st.gy = ly / L;
                st.log_max = best;
                st.stable = 2 * best_at <= options.length;
            }
        },
        options.threads ? options.threads : thread_limit());

    DominanceReport rep;
    rep.paths = options.paths;
    rep.length = options.length;
    rep.seed = options.seed;
    for (std::size_t c = 0; c < C; ++c) {
        std::vector<double> gx, gy, gap;
        double log_max = 0.0, mean_max = 0.0, stable = 0.0;
        for (std::size_t p = 0; p < options.paths; ++p) {
            const PathStat& st = stats[p][c];
            gx.push_back(st.gx);
            gy.push_back(st.gy);
            gap.push_back(st.gx - st.gy);
            log_max = std::max(log_max, st.log_max);
            mean_max += std::exp(st.log_max);
            stable += st.stable ? 1.0 : 0.0;
        }
        CompetitorStats cs;
        cs.name = competitors[c].name;
        const Moments mx = moments(gx), my = moments(gy), mg = moments(gap);
        cs.growth_x_mean = mx.mean;
        cs.growth_x_se = mx.se;
        cs.growth_y_mean = my.mean;
        cs.growth_y_se = my.se;
        cs.gap_mean = mg.mean;
        cs.gap_se = mg.se;
        cs.max_ratio = std::exp(log_max);
        cs.mean_max_ratio = mean_max / static_cast<double>(options.paths);
        cs.stabilized_fraction = stable / static_cast<double>(options.paths);
        rep.competitors.push_back(std::move(cs));
    }
    return rep;
}

void write_dominance_csv(std::ostream& out, const DominanceReport& report) {
    out << "competitor,paths,length,growth_x_mean,growth_x_se,growth_y_mean,growth_y_se,gap_mean,gap_se,"
           "max_ratio,mean_max_ratio,stabilized_fraction\n";
    for (const auto& c : report.competitors) {
        out << c.name << ',' << report.paths << ',' << report.length << ',' << number(c.growth_x_mean) << ','
            << number(c.growth_x_se) << ',' << number(c.growth_y_mean) << ',' << number(c.growth_y_se) << ','
            << number(c.gap_mean) << ',' << number(c.gap_se) << ',' << number(c.max_ratio) << ','
            << number(c.mean_max_ratio) << ',' << number(c.stabilized_fraction) << '\n';
    }
}

}  // namespace vng

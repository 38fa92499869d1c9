#include "vng/certify.hpp"

#include <algorithm>
#include <cmath>

#include "vng/error.hpp"
#include "vng/parallel.hpp"
#include "vng/rng.hpp"

namespace vng {
namespace {

Vec random_direction(CounterRng& rng, std::size_t n) {
    Vec d(n);
    for (double& v : d) v = rng.exponential();
    const double s = sum(d);
    for (double& v : d) v /= s;
    return d;
}

// Builds y top-down: y_child = step(cone, y_parent, node id).
template <class Step>
ContingentPlan grow(const ContingentPlan& plan, const ConeTable& table, Vec root, Step&& step) {
    const auto& tree = *plan.tree;
    ContingentPlan y;
    y.tree = plan.tree;
    y.units = plan.units;
    y.portfolio.assign(tree.size(), Vec{});
    y.portfolio[0] = std::move(root);
    for (std::size_t id = 1; id < tree.size(); ++id)
        y.portfolio[id] = step(edge_cone(tree, table, id), y.portfolio[tree.node(id).parent], id);
    return y;
}

}  // namespace

std::vector<double> supermartingale_defect(const DualPlan& dual, const ContingentPlan& y) {
    if (!dual.tree || dual.tree != y.tree) throw DomainError("supermartingale_defect: dual and plan must share a tree");
    const auto& tree = *dual.tree;
    if (y.portfolio.size() != tree.size()) throw DimensionError("supermartingale_defect: plan does not cover the tree");
    std::vector<double> out(tree.size(), 0.0);
    for (std::size_t id = 1; id < tree.size(); ++id) {
        const Vec E = dual.next_expectation(id);
        out[id] = dot(E, y.portfolio[id]) - dot(dual.prices[id], y.portfolio[tree.node(id).parent]);
    }
    return out;
}

std::vector<ContingentPlan> make_competitors(const ContingentPlan& plan, const ConeTable& table,
                                             std::size_t random_count, std::uint64_t seed) {
    const std::size_t n = table.n();
    const Vec& x0 = plan.portfolio.at(0);
    const double w0 = wealth(x0);
    std::vector<ContingentPlan> out;

    out.push_back(plan);
    ContingentPlan disposed = plan;
    for (auto& x : disposed.portfolio) x = scaled(x, 0.9);
    out.push_back(std::move(disposed));
    out.push_back(grow(plan, table, x0, [](const ConeSpec& c, const Vec& a, std::size_t) { return c.hold(a); }));
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        out.push_back(grow(plan, table, x0, [&](const ConeSpec& c, const Vec& a, std::size_t) {
            return scaled(e, max_growth(c, a, e));
        }));
    }
    for (std::size_t r = 0; r < random_count; ++r) {
        CounterRng rng(seed, r);
        Vec root = scaled(random_direction(rng, n), w0);
        out.push_back(grow(plan, table, std::move(root), [&](const ConeSpec& c, const Vec& a, std::size_t) {
            Vec d;
            if (rng.uniform() < 0.25) {  // a random vertex of the slice
                d.assign(n, 0.0);
                d[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n] = 1.0;
            } else {
                d = random_direction(rng, n);
            }
            const double scale = rng.uniform() < 0.75 ? 1.0 : rng.uniform();
            return scaled(d, scale * max_growth(c, a, d));
        }));
    }
    return out;
}

CertificateReport check_rapid(const ContingentPlan& plan, const DualPlan& dual, const ConeTable& table,
                              const CertifyOptions& options) {
    const std::size_t n = table.n();
    plan.check(n);
    dual.check(n);
    if (plan.tree != dual.tree && (plan.tree->size() != dual.tree->size()))
        throw DimensionError("check_rapid: plan and dual live on different trees");
    const auto& tree = *plan.tree;

    CertificateReport rep;
    rep.self_financing = is_self_financing(plan, table, 1e-8).ok;
    rep.nodes.resize(tree.size() - 1);
    std::vector<Vec> expectation(tree.size());
    parallel_for(
        tree.size() - 1,
        [&](std::size_t k) {
            const std::size_t id = k + 1;
            NodeDiagnostic& d = rep.nodes[k];
            d.node = id;
            expectation[id] = dual.next_expectation(id);
            d.support = std::abs(dot(dual.prices[id], plan.portfolio[tree.node(id).parent]) - 1.0);
            d.dual_cone = normalized_dual_residual(edge_cone(tree, table, id), dual.prices[id], expectation[id]);
        },
        options.threads ? options.threads : thread_limit());

    ContingentPlan on_dual_tree = plan;
    on_dual_tree.tree = dual.tree;
    const auto competitors = make_competitors(on_dual_tree, table, options.competitors, options.seed);
    rep.competitors_tested = competitors.size();
    std::vector<std::vector<double>> defects(competitors.size());
    parallel_for(
        competitors.size(),
        [&](std::size_t c) {
            const auto& y = competitors[c].portfolio;
            auto& out = defects[c];
            out.assign(tree.size(), -1.0);
            for (std::size_t id = 1; id < tree.size(); ++id) {
                const double before = dot(dual.prices[id], y[tree.node(id).parent]);
                const double after = dot(expectation[id], y[id]);
                const double scale = std::max(before, after);
                out[id] = scale > 1e-300 ? (after - before) / scale : 0.0;
            }
        },
        options.threads ? options.threads : thread_limit());

    rep.supermartingale_defect = -1.0;
    for (auto& d : rep.nodes) {
        d.defect = -1.0;
        for (const auto& col : defects) d.defect = std::max(d.defect, col[d.node]);
        rep.support_residual = std::max(rep.support_residual, d.support);
        rep.dual_cone_residual = std::max(rep.dual_cone_residual, d.dual_cone);
        rep.supermartingale_defect = std::max(rep.supermartingale_defect, d.defect);
    }
    rep.pass = rep.self_financing && rep.support_residual <= options.support_tolerance &&
               rep.dual_cone_residual <= options.dual_tolerance &&
               rep.supermartingale_defect <= options.defect_tolerance;
    return rep;
}

}  // namespace vng

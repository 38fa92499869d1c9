#include "vng/tree_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

#include "vng/error.hpp"
#include "vng/lp.hpp"
#include "vng/validation.hpp"

namespace vng {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using EVec = Eigen::VectorXd;

// Layout of the tree program. Every non-root node owns a block [x | z] of
// primal variables and the rows of its edge cone.
struct Layout {
    std::size_t n = 0;
    std::vector<const ConeSpec*> cone;   // per node, null at the root
    std::vector<std::size_t> var;        // first variable of the node block
    std::vector<std::size_t> row;        // first constraint row
    std::size_t vars = 0, rows = 0;
};

Layout make_layout(const ScenarioTree& tree, const ConeTable& table) {
    Layout L;
    L.n = table.n();
    L.cone.assign(tree.size(), nullptr);
    L.var.assign(tree.size(), 0);
    L.row.assign(tree.size(), 0);
    for (std::size_t id = 1; id < tree.size(); ++id) {
        L.cone[id] = &edge_cone(tree, table, id);
        const LiftedCone& lc = L.cone[id]->lifted();
        L.var[id] = L.vars;
        L.row[id] = L.rows;
        L.vars += L.n + lc.aux;
        L.rows += lc.rows.size();
    }
    return L;
}

double max_step(const EVec& v, const EVec& dv) {
    double a = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
    return a;
}

struct IpmOutcome {
    EVec v, lambda;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// Primal-dual interior-point method (Mehrotra predictor-corrector) for
//   minimize  -sum_leaf P ln(w.x_leaf)  s.t.  G v + s = h,  s >= 0,  v >= 0.
IpmOutcome run_ipm(const ScenarioTree& tree, const Layout& L, const Vec& x0,
                   const std::vector<Vec>& weights, std::size_t max_iterations) {
    const std::size_t n = L.n;
    const auto N = static_cast<Eigen::Index>(L.vars);
    const auto m = static_cast<Eigen::Index>(L.rows);

    std::vector<Eigen::Triplet<double>> trip;
    EVec h = EVec::Zero(m);
    for (std::size_t id = 1; id < tree.size(); ++id) {
        const LiftedCone& lc = L.cone[id]->lifted();
        const std::size_t parent = tree.node(id).parent;
        for (std::size_t r = 0; r < lc.rows.size(); ++r) {
            const auto gr = static_cast<Eigen::Index>(L.row[id] + r);
            const Vec& row = lc.rows[r];
            for (std::size_t i = 0; i < n; ++i) {
                if (row[i] == 0.0) continue;
                if (parent == 0) h[gr] -= row[i] * x0[i];
                else trip.emplace_back(gr, static_cast<Eigen::Index>(L.var[parent] + i), row[i]);
            }
            for (std::size_t j = n; j < lc.width(); ++j)
                if (row[j] != 0.0)
                    trip.emplace_back(gr, static_cast<Eigen::Index>(L.var[id] + j - n), row[j]);
        }
    }
    SpMat G(m, N);
    G.setFromTriplets(trip.begin(), trip.end());
    const SpMat Gt = G.transpose();

    std::vector<std::size_t> leaves;
    for (std::size_t id = 1; id < tree.size(); ++id)
        if (tree.is_leaf(id)) leaves.push_back(id);

    EVec v = EVec::Constant(N, 1.0 / static_cast<double>(n));
    EVec s = EVec::Ones(m);
    EVec lam = EVec::Ones(m);
    EVec zeta = EVec::Ones(N);

    auto gradient = [&](const EVec& x) {
        EVec g = EVec::Zero(N);
        for (std::size_t id : leaves) {
            const Vec& w = weights[id];
            double W = 0.0;
            for (std::size_t i = 0; i < n; ++i) W += w[i] * x[L.var[id] + i];
            const double P = tree.node(id).abs_prob;
            for (std::size_t i = 0; i < n; ++i) g[L.var[id] + i] = -P * w[i] / W;
        }
        return g;
    };

    Eigen::SimplicialLDLT<SpMat> ldlt;
    IpmOutcome out;
    double best = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;
    const double h_scale = 1.0 + h.lpNorm<Eigen::Infinity>();
    const double count = static_cast<double>(N + m);

    for (std::size_t it = 0;; ++it) {
        const EVec g = gradient(v);
        const EVec rd = g + Gt * lam - zeta;
        const EVec rp = G * v + s - h;
        const double mu = (s.dot(lam) + v.dot(zeta)) / count;
        const double res = std::max({rp.lpNorm<Eigen::Infinity>() / h_scale, rd.lpNorm<Eigen::Infinity>(), mu});
        if (res < best) {
            stall = res < 0.9 * best ? 0 : stall + 1;
            best = res;
            out.v = v;
            out.lambda = lam;
            out.residual = res;
            out.iterations = it;
        } else {
            ++stall;
        }
        if (res <= 1e-14 || mu <= 1e-20 || stall >= 4 || it >= max_iterations) break;

        // Augmented system, quasi-definite after a small regularization:
        //   [ H + V^-1 Z   G'          ] [dv]   [ -r_d - V^-1 r_c2       ]
        //   [ G            -S Lambda^-1 ] [dl] = [ -r_p + Lambda^-1 r_c1 ]
        std::vector<Eigen::Triplet<double>> kt;
        for (std::size_t id : leaves) {
            const Vec& w = weights[id];
            double W = 0.0;
            for (std::size_t i = 0; i < n; ++i) W += w[i] * v[L.var[id] + i];
            const double c = tree.node(id).abs_prob / (W * W);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    kt.emplace_back(L.var[id] + i, L.var[id] + j, c * w[i] * w[j]);
        }
        for (Eigen::Index i = 0; i < N; ++i) kt.emplace_back(i, i, zeta[i] / v[i]);
        for (const auto& t : trip) {
            kt.emplace_back(N + t.row(), t.col(), t.value());
            kt.emplace_back(t.col(), N + t.row(), t.value());
        }
        for (Eigen::Index r = 0; r < m; ++r) kt.emplace_back(N + r, N + r, -s[r] / lam[r]);
        SpMat K(N + m, N + m);
        K.setFromTriplets(kt.begin(), kt.end());
        for (double reg = 1e-12; reg <= 1e-4; reg *= 100.0) {
            SpMat Kr = K;
            for (Eigen::Index i = 0; i < N + m; ++i) Kr.coeffRef(i, i) += i < N ? reg : -reg;
            ldlt.compute(Kr);
            if (ldlt.info() == Eigen::Success) break;
        }
        if (ldlt.info() != Eigen::Success) break;

        struct Dir {
            EVec dv, ds, dl, dz;
        };
        auto solve = [&](const EVec& rc1, const EVec& rc2) {
            EVec rhs(N + m);
            rhs.head(N) = -rd - rc2.cwiseQuotient(v);
            rhs.tail(m) = -rp + rc1.cwiseQuotient(lam);
            EVec sol = ldlt.solve(rhs);
            for (int k = 0; k < 3; ++k) sol += ldlt.solve(rhs - K * sol);
            Dir d;
            d.dv = sol.head(N);
            d.dl = sol.tail(m);
            d.ds = -rp - G * d.dv;
            d.dz = (-rc2 - zeta.cwiseProduct(d.dv)).cwiseQuotient(v);
            return d;
        };

        const EVec rc1a = s.cwiseProduct(lam);
        const EVec rc2a = v.cwiseProduct(zeta);
        const Dir aff = solve(rc1a, rc2a);
        const double ap = std::min(max_step(v, aff.dv), max_step(s, aff.ds));
        const double ad = std::min(max_step(lam, aff.dl), max_step(zeta, aff.dz));
        const double mu_aff = ((s + ap * aff.ds).dot(lam + ad * aff.dl) + (v + ap * aff.dv).dot(zeta + ad * aff.dz)) / count;
        const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

        const EVec rc1 = rc1a + aff.ds.cwiseProduct(aff.dl) - EVec::Constant(m, sigma * mu);
        const EVec rc2 = rc2a + aff.dv.cwiseProduct(aff.dz) - EVec::Constant(N, sigma * mu);
        const Dir d = solve(rc1, rc2);
        const double a_max = std::min({max_step(v, d.dv), max_step(s, d.ds), max_step(lam, d.dl), max_step(zeta, d.dz)});
        const double a = std::min(1.0, 0.995 * a_max);
        v += a * d.dv;
        s += a * d.ds;
        lam += a * d.dl;
        zeta += a * d.dz;
    }
    return out;
}

// Finds prices c with (c, E) in the dual cone as close as possible to the
// multiplier-based guess c0, measured by max_i |c_i - c0_i| / max(c0).
Vec project_dual(const ConeSpec& cone, const Vec& c0, const Vec& E, double& deviation) {
    const LiftedCone& lc = cone.lifted();
    const std::size_t n = lc.n;
    const std::size_t m = lc.rows.size();
    const std::size_t cols = n + m + 1;  // c, y, t
    const double scale = std::max(*std::max_element(c0.begin(), c0.end()), 1e-300);

    lp::Problem p;
    p.objective.assign(cols, 0.0);
    p.objective[cols - 1] = -1.0;
    for (std::size_t i = 0; i < n; ++i) {  // c_i + sum_r A_a[r][i] y_r >= 0
        Vec row(cols, 0.0);
        row[i] = 1.0;
        for (std::size_t r = 0; r < m; ++r) row[n + r] = lc.rows[r][i];
        p.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {  // sum_r A_b[r][i] y_r >= E_i
        Vec row(cols, 0.0);
        for (std::size_t r = 0; r < m; ++r) row[n + r] = lc.rows[r][n + i];
        p.add(std::move(row), lp::Relation::GreaterEqual, E[i]);
    }
    for (std::size_t k = 0; k < lc.aux; ++k) {  // sum_r A_z[r][k] y_r >= 0
        Vec row(cols, 0.0);
        for (std::size_t r = 0; r < m; ++r) row[n + r] = lc.rows[r][2 * n + k];
        p.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        Vec up(cols, 0.0), lo(cols, 0.0);
        up[i] = 1.0;
        up[cols - 1] = -scale;
        lo[i] = 1.0;
        lo[cols - 1] = scale;
        p.add(std::move(up), lp::Relation::LessEqual, c0[i]);
        p.add(std::move(lo), lp::Relation::GreaterEqual, c0[i]);
    }
    const auto sol = lp::solve(p);
    deviation = sol.x[cols - 1];
    return Vec(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace

const char* to_string(Objective objective) {
    return objective == Objective::Wealth ? "wealth" : "liquidation";
}

Objective parse_objective(std::string_view text) {
    if (text == "wealth") return Objective::Wealth;
    if (text == "liquidation") return Objective::Liquidation;
    throw SchemaError("unknown objective '" + std::string(text) + "' (expected wealth or liquidation)");
}

Vec terminal_weights(const ScenarioTree& tree, const ConeTable& table, std::size_t leaf, Objective objective) {
    if (objective == Objective::Wealth || leaf == 0) return Vec(table.n(), 1.0);
    return edge_cone(tree, table, leaf).liquidation_weights();
}

double plan_objective(const ContingentPlan& plan, const ConeTable& table, Objective objective) {
    const auto& tree = *plan.tree;
    double total = 0.0;
    for (std::size_t id = tree.level_begin(tree.horizon()); id < tree.level_end(tree.horizon()); ++id) {
        const double v = dot(terminal_weights(tree, table, id, objective), plan.portfolio[id]);
        if (!(v > 1e-300)) throw DomainError("plan_objective: terminal value collapses at node " + std::to_string(id));
        total += tree.node(id).abs_prob * std::log(v);
    }
    return total;
}

TreeSolveResult solve_tree_log_optimal(std::shared_ptr<const ScenarioTree> tree_ptr, const ConeTable& table,
                                       const Vec& x0, const TreeSolveOptions& options) {
    if (!tree_ptr) throw DomainError("solve_tree_log_optimal: no tree");
    const ScenarioTree& tree = *tree_ptr;
    const std::size_t n = table.n();
    if (x0.size() != n) throw DimensionError("solve_tree_log_optimal: x0 has the wrong length");
    for (double v : x0)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("solve_tree_log_optimal: x0 must be strictly positive");

    const Layout L = make_layout(tree, table);
    for (std::size_t id = 1; id < tree.size(); ++id)
        if (unit_growth(*L.cone[id]) <= kGammaFloor)
            throw DomainError("solve_tree_log_optimal: a cone admits no positive growth from a single asset (G5 fails)");

    // Solve from unit wealth; conic constraints make the answer scale exactly.
    const double w0 = wealth(x0);
    const Vec x0n = scaled(x0, 1.0 / w0);

    std::vector<Vec> weights(tree.size());
    for (std::size_t id = 1; id < tree.size(); ++id)
        if (tree.is_leaf(id)) weights[id] = terminal_weights(tree, table, id, options.objective);

    const IpmOutcome ipm = run_ipm(tree, L, x0n, weights, options.max_iterations);

    // Scale each node onto its feasible slice, top-down.
    TreeSolveResult res;
    res.iterations = ipm.iterations;
    res.plan.tree = tree_ptr;
    res.plan.units = Units::MarketValue;
    res.plan.portfolio.assign(tree.size(), Vec{});
    res.plan.portfolio[0] = x0n;
    for (std::size_t id = 1; id < tree.size(); ++id) {
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, ipm.v[static_cast<Eigen::Index>(L.var[id] + i)]);
        const Vec& a = res.plan.portfolio[tree.node(id).parent];
        if (sum(x) > 0.0) x = scaled(x, std::min(1.0, max_growth(*L.cone[id], a, x)));
        res.plan.portfolio[id] = std::move(x);
    }

    // Dual prices, deepest level first.
    res.dual.tree = tree_ptr;
    res.dual.prices.assign(tree.size(), Vec{});
    res.dual.terminal.assign(tree.size(), Vec{});
    double worst = ipm.residual;
    for (std::size_t id = tree.size(); id-- > 1;) {
        const auto& node = tree.node(id);
        const Vec& x = res.plan.portfolio[id];
        if (node.children.empty()) {
            const double W = dot(weights[id], x);
            if (!(W > 1e-300)) throw SolverError("solve_tree_log_optimal: terminal wealth collapsed", W);
            res.dual.terminal[id] = scaled(weights[id], 1.0 / W);
        }
        const Vec E = res.dual.next_expectation(id);

        const LiftedCone& lc = L.cone[id]->lifted();
        Vec c0(n, 0.0);
        for (std::size_t r = 0; r < lc.rows.size(); ++r) {
            const double y = ipm.lambda[static_cast<Eigen::Index>(L.row[id] + r)] / node.abs_prob;
            for (std::size_t i = 0; i < n; ++i) c0[i] -= lc.rows[r][i] * y;
        }
        double deviation = 0.0;
        res.dual.prices[id] = project_dual(*L.cone[id], c0, E, deviation);
        worst = std::max(worst, deviation);
        const double support = dot(res.dual.prices[id], res.plan.portfolio[node.parent]);
        worst = std::max(worst, std::abs(support - 1.0));
    }

    // Back to the caller's wealth scale.
    for (auto& x : res.plan.portfolio) x = scaled(x, w0);
    for (auto& p : res.dual.prices) p = scaled(p, 1.0 / w0);
    for (auto& p : res.dual.terminal) p = scaled(p, 1.0 / w0);

    res.objective = plan_objective(res.plan, table, options.objective);
    res.kkt_residual = worst;
    if (!(worst <= options.tolerance))
        throw SolverError("solve_tree_log_optimal: no convergence after " + std::to_string(ipm.iterations) +
                              " iterations",
                          worst);
    return res;
}

DualPlan numeraire_dual_frictionless(const NodeMap& q, const ContingentPlan& plan) {
    if (!plan.tree) throw DomainError("numeraire_dual_frictionless: plan has no tree");
    const auto& tree = *plan.tree;
    if (q.size() != tree.size()) throw DimensionError("numeraire_dual_frictionless: q must cover every node");
    DualPlan dual;
    dual.tree = plan.tree;
    dual.prices.assign(tree.size(), Vec{});
    dual.terminal.assign(tree.size(), Vec{});
    for (std::size_t id = 1; id < tree.size(); ++id) {
        const Vec& xp = plan.portfolio[tree.node(id).parent];
        const double v = dot(q[id], xp);
        if (!(v > 0.0)) throw DomainError("numeraire_dual_frictionless: zero value at node " + std::to_string(id));
        dual.prices[id] = scaled(q[id], 1.0 / v);
        if (tree.is_leaf(id)) {
            const double W = wealth(plan.portfolio[id]);
            if (!(W > 0.0)) throw DomainError("numeraire_dual_frictionless: zero terminal wealth");
            dual.terminal[id] = Vec(xp.size(), 1.0 / W);
        }
    }
    return dual;
}

DualPlan numeraire_dual_frictionless(const ContingentPlan& plan, const ConeTable& table) {
    if (!plan.tree) throw DomainError("numeraire_dual_frictionless: plan has no tree");
    const auto& tree = *plan.tree;
    NodeMap q(tree.size());
    for (std::size_t id = 1; id < tree.size(); ++id) {
        const ConeSpec& cone = edge_cone(tree, table, id);
        if (cone.family() != ConeFamily::Frictionless)
            throw DomainError("numeraire_dual_frictionless: edge cone is not frictionless");
        q[id] = cone.returns();
    }
    return numeraire_dual_frictionless(q, plan);
}

}  // namespace vng

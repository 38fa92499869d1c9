#include "vng/plans.hpp"

#include <cmath>

#include "vng/error.hpp"

namespace vng {
namespace {

void check_vector(const Vec& v, std::size_t n, std::size_t id, const char* what) {
    if (v.size() != n)
        throw DimensionError(std::string(what) + ": node " + std::to_string(id) + " has " +
                             std::to_string(v.size()) + " coordinates, expected " + std::to_string(n));
    for (double x : v)
        if (!std::isfinite(x) || x < 0.0)
            throw DomainError(std::string(what) + ": node " + std::to_string(id) + " has a negative or non-finite entry");
}

}  // namespace

const char* to_string(Units units) {
    return units == Units::MarketValue ? "market_value" : "physical";
}

void ContingentPlan::check(std::size_t n) const {
    if (!tree) throw DomainError("plan has no tree");
    if (portfolio.size() != tree->size()) throw DimensionError("plan does not cover every tree node");
    for (std::size_t id = 0; id < portfolio.size(); ++id) check_vector(portfolio[id], n, id, "plan");
}

void DualPlan::check(std::size_t n) const {
    if (!tree) throw DomainError("dual has no tree");
    if (prices.size() != tree->size() || terminal.size() != tree->size())
        throw DimensionError("dual does not cover every tree node");
    for (std::size_t id = 1; id < tree->size(); ++id) check_vector(prices[id], n, id, "dual");
    for (std::size_t id = 0; id < tree->size(); ++id) {
        if (tree->is_leaf(id)) {
            if (terminal[id].empty()) throw DomainError("dual: terminal layer missing at leaf " + std::to_string(id));
            check_vector(terminal[id], n, id, "dual terminal layer");
        }
    }
}

Vec DualPlan::next_expectation(std::size_t id) const {
    const auto& node = tree->node(id);
    if (node.children.empty()) return terminal.at(id);
    Vec acc(prices.at(node.children.front()).size(), 0.0);
    for (std::size_t c : node.children) {
        const double w = tree->node(c).cond_prob;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * prices[c][i];
    }
    return acc;
}

void BalancedStrategy::check(std::size_t states, std::size_t n) const {
    if (x.size() != states || alpha.size() != states)
        throw DimensionError("balanced strategy must define x and alpha for every state");
    for (std::size_t s = 0; s < states; ++s) {
        check_vector(x[s], n, s, "balanced proportions");
        if (std::abs(sum(x[s]) - 1.0) > 1e-12) throw DomainError("balanced proportions must sum to 1");
        if (!(alpha[s] > 0.0) || !std::isfinite(alpha[s])) throw DomainError("growth factors must be positive");
    }
}

const ConeSpec& edge_cone(const ScenarioTree& tree, const ConeTable& table, std::size_t id) {
    const auto& node = tree.node(id);
    if (node.parent == kNoParent) throw DomainError("the root has no incoming edge");
    const auto from = tree.state_label(node.parent);
    const auto to = *tree.state_label(id);
    if (from) return table.resolve(std::string_view(*from), to);
    return table.resolve(std::nullopt, to);
}

SelfFinancingReport is_self_financing(const ContingentPlan& plan, const ConeTable& table, double tol) {
    const std::size_t n = table.n();
    plan.check(n);
    SelfFinancingReport rep;
    const auto& tree = *plan.tree;
    for (std::size_t id = 1; id < tree.size(); ++id) {
        const ConeSpec& cone = edge_cone(tree, table, id);
        const Vec& a = plan.portfolio[tree.node(id).parent];
        const Vec& b = plan.portfolio[id];
        if (contains(cone, a, b, tol)) continue;
        const double g = max_growth(cone, a, b);
        rep.ok = false;
        rep.violations.push_back({id, std::max(0.0, 1.0 - g)});
    }
    return rep;
}

ContingentPlan expand_balanced(const BalancedStrategy& strategy, std::shared_ptr<const ScenarioTree> tree) {
    if (!tree) throw DomainError("expand_balanced: no tree");
    const std::size_t n = strategy.x.empty() ? 0 : strategy.x.front().size();
    strategy.check(tree->chain().size(), n);
    const auto& root = tree->node(0);
    if (!root.state) throw DomainError("expand_balanced: the tree root carries no state");

    ContingentPlan plan;
    plan.tree = tree;
    plan.portfolio.resize(tree->size());
    std::vector<double> growth(tree->size(), 1.0);
    plan.portfolio[0] = strategy.x[*root.state];
    for (std::size_t id = 1; id < tree->size(); ++id) {
        const auto& node = tree->node(id);
        growth[id] = growth[node.parent] * strategy.alpha[*node.state];
        plan.portfolio[id] = scaled(strategy.x[*node.state], growth[id]);
    }
    return plan;
}

DualPlan expand_balanced_dual(const BalancedStrategy& strategy, const std::vector<Vec>& prices,
                              std::shared_ptr<const ScenarioTree> tree) {
    if (!tree) throw DomainError("expand_balanced_dual: no tree");
    const std::size_t k = tree->chain().size();
    if (prices.size() != k) throw DimensionError("expand_balanced_dual: prices needed for every state");
    const std::size_t n = prices.front().size();
    strategy.check(k, n);

    DualPlan dual;
    dual.tree = tree;
    dual.prices.resize(tree->size());
    dual.terminal.resize(tree->size());
    // discount[id] = alpha(s_1) ... alpha(s_t) along the path to id.
    std::vector<double> discount(tree->size(), 1.0);
    for (std::size_t id = 1; id < tree->size(); ++id) {
        const auto& node = tree->node(id);
        const std::size_t s = *node.state;
        dual.prices[id] = scaled(prices[s], 1.0 / discount[node.parent]);
        discount[id] = discount[node.parent] * strategy.alpha[s];
        if (node.children.empty()) {
            Vec next(n, 0.0);
            for (std::size_t w = 0; w < k; ++w) {
                const double pw = tree->chain().transition[s][w];
                for (std::size_t i = 0; i < n; ++i) next[i] += pw * prices[w][i];
            }
            dual.terminal[id] = scaled(next, 1.0 / discount[id]);
        }
    }
    return dual;
}

std::vector<double> ratio_process(const ContingentPlan& x, const ContingentPlan& y) {
    if (!x.tree || x.tree != y.tree) throw DomainError("ratio_process: plans must share a tree");
    if (x.portfolio.size() != y.portfolio.size()) throw DimensionError("ratio_process: plan sizes differ");
    std::vector<double> out(x.portfolio.size());
    for (std::size_t id = 0; id < out.size(); ++id) {
        const double wx = wealth(x.portfolio[id]);
        if (!(wx > 0.0)) throw DomainError("ratio_process: zero wealth at node " + std::to_string(id));
        out[id] = wealth(y.portfolio[id]) / wx;
    }
    return out;
}

}  // namespace vng

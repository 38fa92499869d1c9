#pragma once

#include <memory>
#include <vector>

#include "vng/cone_table.hpp"
#include "vng/scenario_tree.hpp"

namespace vng {

enum class Units { MarketValue, Physical };

const char* to_string(Units units);

/// Node-indexed nonnegative portfolios x_t(s^t) on a scenario tree.
struct ContingentPlan {
    std::shared_ptr<const ScenarioTree> tree;
    NodeMap portfolio;
    Units units = Units::MarketValue;

    /// Throws unless every node carries a finite nonnegative n-vector.
    void check(std::size_t n) const;
};

/// Dual path p_t(s^t) stored at nodes of depth 1..T. The prices one step past
/// the horizon enter only through their conditional expectation, kept per
/// leaf in `terminal`.
struct DualPlan {
    std::shared_ptr<const ScenarioTree> tree;
    NodeMap prices;    // root entry empty
    NodeMap terminal;  // non-empty at leaves only

    void check(std::size_t n) const;

    /// E_t p_{t+1} at a node: average of the children's prices, or the
    /// terminal vector at a leaf.
    Vec next_expectation(std::size_t id) const;
};

/// Fixed proportions x(s) on the simplex growing by factors alpha(s) > 0,
/// both keyed by the current state.
struct BalancedStrategy {
    std::vector<Vec> x;
    Vec alpha;

    void check(std::size_t states, std::size_t n) const;
};

/// Cone of the edge into `id` (resolved from parent and node states).
const ConeSpec& edge_cone(const ScenarioTree& tree, const ConeTable& table, std::size_t id);

struct FinancingViolation {
    std::size_t node = 0;
    /// Fraction of the node's portfolio that cannot be financed.
    double residual = 0.0;
};

struct SelfFinancingReport {
    bool ok = true;
    std::vector<FinancingViolation> violations;
};

SelfFinancingReport is_self_financing(const ContingentPlan& plan, const ConeTable& table,
                                      double tol = kMembershipTolerance);

/// x_0 = x(s_0), x_t = alpha(s_t) ... alpha(s_1) x(s_t). Needs a labeled root.
ContingentPlan expand_balanced(const BalancedStrategy& strategy, std::shared_ptr<const ScenarioTree> tree);

/// p_1 = p(s_1), p_t = p(s_t) / (alpha(s_{t-1}) ... alpha(s_1)); the terminal
/// layer continues the same formula one step past the horizon.
DualPlan expand_balanced_dual(const BalancedStrategy& strategy, const std::vector<Vec>& prices,
                              std::shared_ptr<const ScenarioTree> tree);

/// |y_t| / |x_t| per node.
std::vector<double> ratio_process(const ContingentPlan& x, const ContingentPlan& y);

}  // namespace vng

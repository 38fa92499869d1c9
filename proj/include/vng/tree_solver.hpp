#pragma once

#include <memory>
#include <string_view>

#include "vng/cone_table.hpp"
#include "vng/plans.hpp"

namespace vng {

/// Terminal value maximized in expectation: ln|x_T| or ln psi(x_T).
enum class Objective { Wealth, Liquidation };

const char* to_string(Objective objective);
Objective parse_objective(std::string_view text);

struct TreeSolveOptions {
    Objective objective = Objective::Wealth;
    /// Largest acceptable kkt_residual; larger values raise SolverError.
    double tolerance = 1e-8;
    std::size_t max_iterations = 200;
};

struct TreeSolveResult {
    ContingentPlan plan;
    DualPlan dual;
    double objective = 0.0;     // E ln(terminal value), nats
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
};

/// Maximizes E ln psi(x_T) over self-financing plans started at x0 with a
/// primal-dual interior-point method on the whole tree. The returned plan is
/// scaled onto the feasible set exactly, and the dual is built node by node
/// from the constraint multipliers so that every (p_t, E_t p_{t+1}) lies in
/// the dual cone of its edge.
TreeSolveResult solve_tree_log_optimal(std::shared_ptr<const ScenarioTree> tree, const ConeTable& table,
                                       const Vec& x0, const TreeSolveOptions& options = {});

/// E ln psi(x_T) of a plan, psi taken from the cone of each leaf's edge.
double plan_objective(const ContingentPlan& plan, const ConeTable& table, Objective objective);

/// Weights w with psi(b) = w.b at a leaf.
Vec terminal_weights(const ScenarioTree& tree, const ConeTable& table, std::size_t leaf, Objective objective);

/// p_t = q_t / (q_t . x_{t-1}) at every node of depth >= 1, where q holds
/// per-node value relatives; the terminal layer is e / |x_T|.
DualPlan numeraire_dual_frictionless(const NodeMap& q, const ContingentPlan& plan);

/// Same, with q taken from the returns of each frictionless edge cone.
DualPlan numeraire_dual_frictionless(const ContingentPlan& plan, const ConeTable& table);

}  // namespace vng

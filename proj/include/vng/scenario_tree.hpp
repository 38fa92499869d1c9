#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vng/markov.hpp"
#include "vng/types.hpp"

namespace vng {

inline constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct TreeNode {
    std::size_t id = 0;
    std::size_t parent = kNoParent;
    std::size_t depth = 0;
    /// Index into the chain's states; nullopt for an unlabeled root.
    std::optional<std::size_t> state;
    double cond_prob = 1.0;  // given the parent
    double abs_prob = 1.0;   // product of cond_prob along the root path
    std::vector<std::size_t> children;
};

/// Per-node vectors indexed by node id; an empty entry means "undefined".
using NodeMap = std::vector<Vec>;

/// Finite event tree enumerating the positive-probability histories of a
/// Markov chain up to a horizon. Nodes are numbered breadth-first, so every
/// depth occupies a contiguous id range.
///
/// When the initial law is a point mass the root carries that state and its
/// children follow the transition row. Otherwise the root is unlabeled (the
/// first state is not observed) and depth-1 nodes follow initial * P.
class ScenarioTree {
public:
    static ScenarioTree build(const MarkovSpec& spec, std::size_t horizon,
                              std::size_t node_limit = 1'000'000);

    const MarkovSpec& chain() const { return chain_; }
    std::size_t horizon() const { return horizon_; }
    std::size_t size() const { return nodes_.size(); }
    const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    /// Ids of the nodes at depth t.
    std::vector<std::size_t> level(std::size_t t) const;
    std::size_t level_begin(std::size_t t) const { return level_offsets_.at(t); }
    std::size_t level_end(std::size_t t) const { return level_offsets_.at(t + 1); }
    bool is_leaf(std::size_t id) const { return nodes_.at(id).children.empty(); }

    /// Label of the node's state, nullopt for an unlabeled root.
    std::optional<std::string> state_label(std::size_t id) const;

    /// State indices s_1..s_t along the root path (the root's own state excluded).
    std::vector<std::size_t> path_states(std::size_t id) const;

private:
    MarkovSpec chain_;
    std::size_t horizon_ = 0;
    std::vector<TreeNode> nodes_;
    std::vector<std::size_t> level_offsets_;
};

/// For every depth-t node: sum over children c of P(c | node) f(c).
/// Only depth-t entries of the result are filled.
NodeMap conditional_expectation(const ScenarioTree& tree, const NodeMap& f, std::size_t t);

}  // namespace vng

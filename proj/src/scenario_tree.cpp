#include "vng/scenario_tree.hpp"

#include <algorithm>

#include "vng/error.hpp"

namespace vng {

ScenarioTree ScenarioTree::build(const MarkovSpec& spec, std::size_t horizon, std::size_t node_limit) {
    spec.validate();
    if (horizon < 1) throw DomainError("build_tree: horizon must be at least 1");
    const std::size_t k = spec.size();

    ScenarioTree tree;
    tree.chain_ = spec;
    tree.horizon_ = horizon;

    TreeNode root;
    const auto mass = std::find(spec.initial.begin(), spec.initial.end(), 1.0);
    Vec first_law(k, 0.0);
    if (mass != spec.initial.end()) {
        root.state = static_cast<std::size_t>(mass - spec.initial.begin());
    } else {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) first_law[j] += spec.initial[i] * spec.transition[i][j];
    }
    tree.nodes_.push_back(root);
    tree.level_offsets_ = {0, 1};

    for (std::size_t t = 1; t <= horizon; ++t) {
        const std::size_t begin = tree.level_offsets_[t - 1];
        const std::size_t end = tree.level_offsets_[t];
        for (std::size_t p = begin; p < end; ++p) {
            const Vec& law = tree.nodes_[p].state ? spec.transition[*tree.nodes_[p].state] : first_law;
            for (std::size_t j = 0; j < k; ++j) {
                if (law[j] <= 0.0) continue;
                if (tree.nodes_.size() >= node_limit)
                    throw DomainError("build_tree: node limit " + std::to_string(node_limit) + " exceeded");
                TreeNode c;
                c.id = tree.nodes_.size();
                c.parent = p;
                c.depth = t;
                c.state = j;
                c.cond_prob = law[j];
                c.abs_prob = tree.nodes_[p].abs_prob * law[j];
                tree.nodes_[p].children.push_back(c.id);
                tree.nodes_.push_back(std::move(c));
            }
        }
        tree.level_offsets_.push_back(tree.nodes_.size());
    }
    return tree;
}

std::vector<std::size_t> ScenarioTree::level(std::size_t t) const {
    std::vector<std::size_t> ids;
    for (std::size_t i = level_begin(t); i < level_end(t); ++i) ids.push_back(i);
    return ids;
}

std::optional<std::string> ScenarioTree::state_label(std::size_t id) const {
    const auto& s = nodes_.at(id).state;
    if (!s) return std::nullopt;
    return chain_.states[*s];
}

std::vector<std::size_t> ScenarioTree::path_states(std::size_t id) const {
    std::vector<std::size_t> out;
    for (std::size_t v = id; nodes_.at(v).parent != kNoParent; v = nodes_[v].parent) out.push_back(*nodes_[v].state);
    std::reverse(out.begin(), out.end());
    return out;
}

NodeMap conditional_expectation(const ScenarioTree& tree, const NodeMap& f, std::size_t t) {
    if (f.size() != tree.size()) throw DimensionError("conditional_expectation: map size differs from tree size");
    if (t >= tree.horizon()) throw DomainError("conditional_expectation: depth must be below the horizon");
    NodeMap out(tree.size());
    for (std::size_t id = tree.level_begin(t); id < tree.level_end(t); ++id) {
        const auto& node = tree.node(id);
        Vec acc;
        for (std::size_t c : node.children) {
            const Vec& fc = f[c];
            if (fc.empty()) throw DomainError("conditional_expectation: value missing at node " + std::to_string(c));
            if (acc.empty()) acc.assign(fc.size(), 0.0);
            if (fc.size() != acc.size()) throw DimensionError("conditional_expectation: ragged values");
            for (std::size_t i = 0; i < fc.size(); ++i) acc[i] += tree.node(c).cond_prob * fc[i];
        }
        out[id] = std::move(acc);
    }
    return out;
}

}  // namespace vng

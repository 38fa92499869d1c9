#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vng/types.hpp"

namespace vng {

/// Finite-state Markov chain driving the market.
struct MarkovSpec {
    std::vector<std::string> states;
    std::vector<Vec> transition;  // row-stochastic
    Vec initial;
    bool stationary = false;

    std::size_t size() const { return states.size(); }

    /// Throws DomainError / DimensionError unless rows and the initial law are
    /// probability vectors (sums within 1e-12) and labels are unique.
    void validate() const;

    std::size_t index_of(std::string_view label) const;

    /// pi with pi P = pi, sum(pi) = 1; throws SolverError when the residual
    /// exceeds 1e-10.
    Vec stationary_distribution() const;

    /// Chain with a single absorbing state.
    static MarkovSpec single(std::string label);
    /// i.i.d. draws from `probs`, started in the same law.
    static MarkovSpec iid(std::vector<std::string> labels, Vec probs);
};

/// State-index paths s_0..s_{length-1}, s_0 drawn from the initial law.
/// Path i uses counter-RNG stream i, so it depends only on (seed, i).
std::vector<std::vector<std::size_t>> sample_paths(const MarkovSpec& spec, std::size_t length,
                                                   std::size_t count, std::uint64_t seed);

}  // namespace vng

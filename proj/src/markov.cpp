#include "vng/markov.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vng/error.hpp"
#include "vng/rng.hpp"

namespace vng {
namespace {

constexpr double kProbTol = 1e-12;

void check_distribution(const Vec& p, std::size_t k, const std::string& what) {
    if (p.size() != k) throw DimensionError(what + ": expected " + std::to_string(k) + " entries");
    for (double x : p)
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(what + ": entries must be nonnegative");
    if (std::abs(sum(p) - 1.0) > kProbTol) throw DomainError(what + ": entries must sum to 1");
}

std::size_t draw(const Vec& probs, double u) {
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (probs[j] <= 0.0) continue;
        last = j;
        acc += probs[j];
        if (u < acc) return j;
    }
    return last;
}

double stationarity_residual(const MarkovSpec& m, const Vec& pi) {
    const std::size_t k = m.size();
    double r = std::abs(sum(pi) - 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += pi[i] * m.transition[i][j];
        r = std::max(r, std::abs(s - pi[j]));
    }
    return r;
}

}  // namespace

void MarkovSpec::validate() const {
    const std::size_t k = size();
    if (k == 0) throw DimensionError("markov chain has no states");
    if (std::set<std::string>(states.begin(), states.end()).size() != k)
        throw DomainError("markov state labels must be unique");
    for (const auto& s : states)
        if (s.empty() || s == "*" || s.find("->") != std::string::npos)
            throw DomainError("markov state label '" + s + "' is reserved or empty");
    if (transition.size() != k) throw DimensionError("transition matrix must have one row per state");
    for (std::size_t i = 0; i < k; ++i) check_distribution(transition[i], k, "transition row " + states[i]);
    check_distribution(initial, k, "initial distribution");
}

std::size_t MarkovSpec::index_of(std::string_view label) const {
    const auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end()) throw DomainError("unknown state '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - states.begin());
}

Vec MarkovSpec::stationary_distribution() const {
    validate();
    const std::size_t k = size();
    // Solve (P' - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    std::vector<Vec> A(k, Vec(k + 1, 0.0));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) A[r][c] = transition[c][r] - (r == c ? 1.0 : 0.0);
    }
    for (std::size_t c = 0; c < k; ++c) A[k - 1][c] = 1.0;
    A[k - 1][k] = 1.0;

    bool singular = false;
    for (std::size_t c = 0; c < k && !singular; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-13) {
            singular = true;
            break;
        }
        std::swap(A[c], A[piv]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t j = c; j <= k; ++j) A[r][j] -= f * A[c][j];
        }
    }

    Vec pi(k, 0.0);
    if (!singular) {
        for (std::size_t i = 0; i < k; ++i) pi[i] = std::max(0.0, A[i][k] / A[i][i]);
    } else {
        // Reducible chain: Cesaro average of the initial law under P.
        Vec cur = initial;
        const std::size_t steps = 20000;
        for (std::size_t t = 0; t < steps; ++t) {
            for (std::size_t i = 0; i < k; ++i) pi[i] += cur[i];
            Vec next(k, 0.0);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) next[j] += cur[i] * transition[i][j];
            cur = std::move(next);
        }
    }
    const double s = sum(pi);
    for (double& x : pi) x /= s;
    const double res = stationarity_residual(*this, pi);
    if (res > 1e-10) throw SolverError("stationary distribution not found", res);
    return pi;
}

MarkovSpec MarkovSpec::single(std::string label) {
    return MarkovSpec{{std::move(label)}, {{1.0}}, {1.0}, true};
}

MarkovSpec MarkovSpec::iid(std::vector<std::string> labels, Vec probs) {
    MarkovSpec m;
    m.states = std::move(labels);
    m.transition.assign(m.states.size(), probs);
    m.initial = std::move(probs);
    m.stationary = true;
    m.validate();
    return m;
}

std::vector<std::vector<std::size_t>> sample_paths(const MarkovSpec& spec, std::size_t length,
                                                   std::size_t count, std::uint64_t seed) {
    spec.validate();
    if (length == 0 || count == 0) throw DomainError("sample_paths: length and count must be positive");
    std::vector<std::vector<std::size_t>> paths(count);
    for (std::size_t p = 0; p < count; ++p) {
        CounterRng rng(seed, p);
        auto& path = paths[p];
        path.resize(length);
        path[0] = draw(spec.initial, rng.uniform());
        for (std::size_t t = 1; t < length; ++t) path[t] = draw(spec.transition[path[t - 1]], rng.uniform());
    }
    return paths;
}

}  // namespace vng

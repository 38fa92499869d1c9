#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "support.hpp"
#include "vng/error.hpp"
#include "vng/markov.hpp"
#include "vng/scenario_tree.hpp"

using namespace vng;
using Catch::Matchers::WithinAbs;

namespace {

MarkovSpec chain(std::vector<Vec> P, Vec initial) {
    MarkovSpec s;
    for (std::size_t i = 0; i < P.size(); ++i) s.states.push_back(std::string(1, static_cast<char>('A' + i)));
    s.transition = std::move(P);
    s.initial = std::move(initial);
    return s;
}

}  // namespace

TEST_CASE("full binary tree of depth 2 has seven nodes") {
    const auto t = ScenarioTree::build(chain({{0.5, 0.5}, {0.5, 0.5}}, {1.0, 0.0}), 2);
    CHECK(t.size() == 7);
    CHECK(t.level(2).size() == 4);
    CHECK(t.node(0).state == std::optional<std::size_t>(0));
}

TEST_CASE("zero-probability branches are pruned") {
    const auto t = ScenarioTree::build(chain({{0.5, 0.5}, {0.0, 1.0}}, {1.0, 0.0}), 2);
    // A -> {A, B}; A -> {A, B}; B -> {B}
    CHECK(t.size() == 6);
    for (const auto& n : t.nodes()) CHECK(n.cond_prob > 0.0);
}

TEST_CASE("three-state tree of depth 5 by enumeration") {
    const std::vector<Vec> P{{0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, {0.6, 0.2, 0.2}};
    const auto t = ScenarioTree::build(chain(P, {0.0, 1.0, 0.0}), 5);
    CHECK(t.size() == 364);  // 1 + 3 + 9 + 27 + 81 + 243
    for (std::size_t d = 0; d <= 5; ++d) {
        double s = 0.0;
        for (auto id : t.level(d)) s += t.node(id).abs_prob;
        CHECK_THAT(s, WithinAbs(1.0, 1e-12));
    }
    // Distribution of the depth-5 state equals e_B P^5.
    Vec law{0.0, 1.0, 0.0};
    for (int step = 0; step < 5; ++step) {
        Vec next(3, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) next[j] += law[i] * P[i][j];
        law = next;
    }
    Vec got(3, 0.0);
    for (auto id : t.level(5)) got[*t.node(id).state] += t.node(id).abs_prob;
    for (int j = 0; j < 3; ++j) CHECK_THAT(got[j], WithinAbs(law[j], 1e-12));
}

TEST_CASE("unlabeled root follows initial times P") {
    const auto t = ScenarioTree::build(chain({{0.9, 0.1}, {0.2, 0.8}}, {0.5, 0.5}), 1);
    CHECK_FALSE(t.node(0).state.has_value());
    CHECK_FALSE(t.state_label(0).has_value());
    REQUIRE(t.size() == 3);
    CHECK_THAT(t.node(1).cond_prob, WithinAbs(0.55, 1e-15));
    CHECK_THAT(t.node(2).cond_prob, WithinAbs(0.45, 1e-15));
}

TEST_CASE("node limit is enforced") {
    CHECK_THROWS(ScenarioTree::build(chain({{0.5, 0.5}, {0.5, 0.5}}, {1.0, 0.0}), 20, 1000));
}

TEST_CASE("conditional expectation examples") {
    const auto t = ScenarioTree::build(chain({{0.5, 0.5}, {0.5, 0.5}}, {1.0, 0.0}), 1);
    NodeMap f(t.size());
    for (std::size_t id = 0; id < t.size(); ++id) f[id] = {3.0};
    CHECK_THAT(conditional_expectation(t, f, 0)[0][0], WithinAbs(3.0, 1e-15));
    f[1] = {0.0};
    f[2] = {2.0};
    CHECK_THAT(conditional_expectation(t, f, 0)[0][0], WithinAbs(1.0, 1e-15));

    const auto t3 = ScenarioTree::build(chain({{0.2, 0.3, 0.5}, {1, 0, 0}, {1, 0, 0}}, {1.0, 0.0, 0.0}), 1);
    NodeMap g(t3.size());
    g[0] = {0.0};
    g[1] = {10.0};
    g[2] = {0.0};
    g[3] = {2.0};
    CHECK_THAT(conditional_expectation(t3, g, 0)[0][0], WithinAbs(3.0, 1e-12));
}

TEST_CASE("tower property of conditional expectations") {
    const std::vector<Vec> P{{0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, {0.6, 0.2, 0.2}};
    const auto t = ScenarioTree::build(chain(P, {1.0, 0.0, 0.0}), 3);
    CounterRng rng(8);
    NodeMap f(t.size());
    for (auto& v : f) v = {rng.uniform(), rng.uniform()};
    const NodeMap e2 = conditional_expectation(t, f, 2);
    const NodeMap e1 = conditional_expectation(t, e2, 1);
    for (auto id : t.level(1)) {
        Vec direct(2, 0.0);
        for (auto c : t.node(id).children)
            for (auto g : t.node(c).children)
                for (int i = 0; i < 2; ++i) direct[i] += t.node(c).cond_prob * t.node(g).cond_prob * f[g][i];
        for (int i = 0; i < 2; ++i) CHECK_THAT(e1[id][i], WithinAbs(direct[i], 1e-12));
    }
}

TEST_CASE("absorbing chain gives a constant path") {
    const auto paths = sample_paths(chain({{1.0, 0.0}, {0.0, 1.0}}, {1.0, 0.0}), 20, 1, 5);
    REQUIRE(paths.size() == 1);
    for (auto s : paths[0]) CHECK(s == 0);
}

TEST_CASE("sampling is deterministic per seed and path index") {
    const auto spec = chain({{0.3, 0.7}, {0.6, 0.4}}, {0.5, 0.5});
    const auto a = sample_paths(spec, 50, 10, 99);
    const auto b = sample_paths(spec, 50, 10, 99);
    CHECK(a == b);
    const auto c = sample_paths(spec, 50, 4, 99);
    for (std::size_t i = 0; i < 4; ++i) CHECK(c[i] == a[i]);
    CHECK(sample_paths(spec, 50, 10, 100) != a);
}

TEST_CASE("single-step frequencies stay within three sigma") {
    const auto paths = sample_paths(chain({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5}), 1, 10000, 1);
    double ones = 0.0;
    for (const auto& p : paths) ones += p[0];
    CHECK(std::abs(ones / 10000.0 - 0.5) <= 3.0 * std::sqrt(0.25 / 10000.0));
}

TEST_CASE("empirical transition frequencies pass a chi-square check") {
    const std::vector<Vec> P{{0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, {0.6, 0.2, 0.2}};
    const auto spec = chain(P, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto paths = sample_paths(spec, 101, 1000, 12);
    std::vector<Vec> counts(3, Vec(3, 0.0));
    for (const auto& p : paths)
        for (std::size_t t = 1; t < p.size(); ++t) counts[p[t - 1]][p[t]] += 1.0;
    double chi2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double row = counts[i][0] + counts[i][1] + counts[i][2];
        for (int j = 0; j < 3; ++j) {
            const double e = row * P[i][j];
            chi2 += (counts[i][j] - e) * (counts[i][j] - e) / e;
        }
    }
    // 6 degrees of freedom; the 0.999 quantile is 22.46.
    CHECK(chi2 < 22.46);
}

TEST_CASE("stationary distribution solves pi P = pi") {
    const auto spec = chain({{0.9, 0.1}, {0.2, 0.8}}, {1.0, 0.0});
    const Vec pi = spec.stationary_distribution();
    CHECK_THAT(pi[0], WithinAbs(2.0 / 3.0, 1e-12));
    CHECK_THAT(pi[1], WithinAbs(1.0 / 3.0, 1e-12));
}

TEST_CASE("invalid chains are rejected") {
    CHECK_THROWS_AS(chain({{0.5, 0.6}, {0.5, 0.5}}, {1.0, 0.0}).validate(), DomainError);
    CHECK_THROWS_AS(chain({{0.5, 0.5}, {0.5, 0.5}}, {0.7, 0.7}).validate(), DomainError);
    CHECK_THROWS_AS(chain({{1.0}, {0.5, 0.5}}, {1.0, 0.0}).validate(), DimensionError);
}

#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "vng/error.hpp"
#include "vng/validation.hpp"

using namespace vng;
using Catch::Matchers::WithinAbs;

TEST_CASE("well-posed proportional cost table passes every condition") {
    const auto cone = ConeSpec::proportional_tc({2.0, 1.0}, {0.1, 0.1}, {0.2, 0.2});
    const auto rep = validate_assumptions(ConeTable::uniform(cone));
    CHECK(rep.ok());
    CHECK(rep.violations.empty());
    // Bisection oracle: largest g with (e_i, g e) in G, minimized over i.
    double oracle = 1e300;
    for (int i = 0; i < 2; ++i) {
        Vec ei{0.0, 0.0};
        ei[i] = 1.0;
        oracle = std::min(oracle, vt::bisect([&](double g) {
                              return vt::tc_member(cone.returns(), cone.lambda_plus(), cone.lambda_minus(), ei, {g, g});
                          }, 1.0));
    }
    CHECK_THAT(oracle, WithinAbs(8.0 / 19.0, 1e-10));
    CHECK_THAT(rep.gamma, WithinAbs(oracle, 1e-10));
    CHECK_THAT(rep.M_bound, WithinAbs(2.0, 1e-12));
}

TEST_CASE("frictionless bound M equals the largest return") {
    const auto rep = validate_assumptions(ConeTable::uniform(ConeSpec::frictionless({2.0, 1.0})));
    CHECK(rep.ok());
    CHECK_THAT(rep.M_bound, WithinAbs(2.0, 1e-12));
}

TEST_CASE("selling for nothing breaks the positive-growth condition") {
    ConeTable t;
    t.set("*->*", ConeSpec::proportional_tc({1.0, 1.0}, {0.0, 0.0}, {1.0, 0.1}));
    const auto rep = validate_assumptions(t);
    CHECK_FALSE(rep.g5_ok);
    CHECK_FALSE(rep.g3_ok);
    CHECK_FALSE(rep.ok());
    CHECK(rep.g1_ok);
    REQUIRE_FALSE(rep.violations.empty());
    bool witnessed = false;
    for (const auto& v : rep.violations) {
        if (v.condition != "G5") continue;
        witnessed = true;
        CHECK(confirm_violation(t, rep, v));
    }
    CHECK(witnessed);
}

TEST_CASE("bound M covers sampled members of every family") {
    CounterRng rng(3);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = 2 + k % 3;
        const ConeSpec cone = k % 3 == 0 ? vt::random_frictionless(rng, n)
                              : k % 3 == 1 ? vt::random_tc(rng, n)
                                           : vt::random_currency(rng, n);
        const auto rep = validate_assumptions(ConeTable::uniform(cone), {500, 9});
        CHECK(rep.g1_ok);
        CHECK(rep.g2_ok);
        CHECK(rep.g4_ok);
        CHECK(rep.gamma > 0.0);
        // Every unit position reaches the all-ones direction at rate >= gamma.
        for (std::size_t i = 0; i < n; ++i) {
            Vec ei(n, 0.0);
            ei[i] = 1.0;
            CHECK(contains(cone, ei, Vec(n, rep.gamma)));
        }
    }
}

TEST_CASE("empty table is rejected") {
    CHECK_THROWS_AS(validate_assumptions(ConeTable{}), DimensionError);
}

TEST_CASE("validation is deterministic for a seed") {
    CounterRng rng(4);
    const auto cone = vt::random_currency(rng, 3);
    const auto r1 = validate_assumptions(ConeTable::uniform(cone), {200, 77});
    const auto r2 = validate_assumptions(ConeTable::uniform(cone), {200, 77});
    CHECK(r1.gamma == r2.gamma);
    CHECK(r1.M_bound == r2.M_bound);
    CHECK(r1.violations.size() == r2.violations.size());
}

#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "vng/certify.hpp"
#include "vng/error.hpp"
#include "vng/model_io.hpp"

using namespace vng;

namespace {

Json kelly_json() {
    return Json::parse(R"({
      "markov": {"states": ["U", "D"], "transition": [[0.5, 0.5], [0.5, 0.5]], "initial": [0.5, 0.5]},
      "cones": {
        "*->U": {"family": "proportional_tc", "returns": [1, 2], "lambda_plus": [0.01, 0.01], "lambda_minus": [0.01, 0.01]},
        "*->D": {"family": "proportional_tc", "returns": [1, 0.5], "lambda_plus": [0.01, 0.01], "lambda_minus": [0.01, 0.01]}
      }
    })");
}

}  // namespace

TEST_CASE("model round-trips through JSON") {
    const ModelConfig m = model_from_json(kelly_json());
    CHECK(m.markov.states == std::vector<std::string>{"U", "D"});
    CHECK(m.units == Units::MarketValue);
    CHECK(m.objective == Objective::Wealth);
    const ModelConfig again = model_from_json(model_to_json(m));
    CHECK(again.markov.transition == m.markov.transition);
    CHECK(again.markov.initial == m.markov.initial);
    CHECK(again.cones.entries() == m.cones.entries());
}

TEST_CASE("cone parameters serialize per family") {
    CounterRng rng(2);
    for (const ConeSpec& c : {vt::random_frictionless(rng, 3), vt::random_tc(rng, 3), vt::random_currency(rng, 3)})
        CHECK(cone_from_json(cone_to_json(c)) == c);
    CHECK(cone_to_json(ConeSpec::proportional_tc({1, 2}, {0.1, 0.1}, {0.2, 0.2})).dump() ==
          R"({"family":"proportional_tc","returns":[1.0,2.0],"lambda_plus":[0.1,0.1],"lambda_minus":[0.2,0.2]})");
}

TEST_CASE("missing initial law defaults to the stationary one") {
    Json j = kelly_json();
    j["markov"].erase("initial");
    j["markov"]["transition"] = Json::parse("[[0.9, 0.1], [0.2, 0.8]]");
    const ModelConfig m = model_from_json(j);
    CHECK(std::abs(m.markov.initial[0] - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("currency models default to physical units") {
    Json j = kelly_json();
    j["cones"] = Json::parse(R"({"*->*": {"family": "currency", "rates": [[1, 0.9], [0.9, 1]]}})");
    CHECK(model_from_json(j).units == Units::Physical);
}

TEST_CASE("schema violations are reported") {
    auto expect_schema = [](Json j) { CHECK_THROWS_AS(model_from_json(j), SchemaError); };
    Json j = kelly_json();
    j["cones"].erase("*->D");
    expect_schema(j);  // D is reachable but has no cone

    j = kelly_json();
    j["cones"]["*->U"]["family"] = "options";
    expect_schema(j);

    j = kelly_json();
    j["cones"]["*->U"]["lambda"] = 0.1;
    expect_schema(j);

    j = kelly_json();
    j["cones"]["X->U"] = j["cones"]["*->U"];
    expect_schema(j);

    j = kelly_json();
    j["markov"]["transition"][0][0] = 0.7;
    expect_schema(j);

    j = kelly_json();
    j["markov"]["states"] = Json::parse("[\"U\", 3]");
    expect_schema(j);

    j = kelly_json();
    j["extra"] = 1;
    expect_schema(j);

    j = kelly_json();
    j["conventions"] = Json::parse(R"({"objective": "utility"})");
    expect_schema(j);

    j = kelly_json();
    j["cones"]["*->U"]["returns"] = Json::parse("[1, 2, 3]");
    expect_schema(j);
}

TEST_CASE("unlabeled root needs wildcard-source entries") {
    Json j = kelly_json();
    j["cones"] = Json::parse(R"({
      "U->U": {"family": "frictionless", "returns": [1, 2]}, "D->U": {"family": "frictionless", "returns": [1, 2]},
      "U->D": {"family": "frictionless", "returns": [1, 0.5]}, "D->D": {"family": "frictionless", "returns": [1, 0.5]}
    })");
    CHECK_THROWS_AS(model_from_json(j), SchemaError);
    j["markov"]["initial"] = Json::parse("[1, 0]");
    CHECK_NOTHROW(model_from_json(j));
}

TEST_CASE("degenerate friction loads so that validation can reject it") {
    Json j = kelly_json();
    j["cones"]["*->U"]["lambda_minus"] = Json::parse("[1, 1]");
    CHECK_NOTHROW(model_from_json(j));
}

TEST_CASE("plan and dual survive a write and read") {
    const ModelConfig m = model_from_json(kelly_json());
    const auto tree = vt::tree_of(m.markov, 3);
    const auto r = solve_tree_log_optimal(tree, m.cones, {0.5, 0.5});
    const Json doc = Json::parse(to_json(r, Objective::Wealth).dump());
    const auto plan = plan_from_json(doc.at("plan"), tree);
    const auto dual = dual_from_json(doc.at("dual"), tree);
    CHECK(plan.portfolio == r.plan.portfolio);
    CHECK(dual.prices == r.dual.prices);
    CHECK(dual.terminal == r.dual.terminal);
    const auto a = check_rapid(r.plan, r.dual, m.cones);
    const auto b = check_rapid(plan, dual, m.cones);
    CHECK(a.pass == b.pass);
    CHECK(a.support_residual == b.support_residual);
    CHECK(a.dual_cone_residual == b.dual_cone_residual);
    CHECK(a.supermartingale_defect == b.supermartingale_defect);
}

TEST_CASE("plan on the wrong tree is rejected") {
    const ModelConfig m = model_from_json(kelly_json());
    const auto r = solve_tree_log_optimal(vt::tree_of(m.markov, 2), m.cones, {0.5, 0.5});
    const Json doc = to_json(r, Objective::Wealth);
    CHECK_THROWS_AS(plan_from_json(doc.at("plan"), vt::tree_of(m.markov, 3)), SchemaError);
    Json broken = doc.at("plan");
    broken["nodes"][2]["state"] = "U";
    CHECK_THROWS_AS(plan_from_json(broken, vt::tree_of(m.markov, 2)), SchemaError);
}

TEST_CASE("equilibrium round-trips") {
    const ModelConfig m = model_from_json(kelly_json());
    const auto eq = solve_stationary_equilibrium(m.markov, m.cones);
    const auto back = equilibrium_from_json(Json::parse(to_json(eq, m.markov).dump()), m.markov);
    CHECK(back.strategy.x == eq.strategy.x);
    CHECK(back.strategy.alpha == eq.strategy.alpha);
    CHECK(back.prices == eq.prices);
    CHECK(back.log_growth == eq.log_growth);
    CHECK(back.prices_feasible == eq.prices_feasible);
}

TEST_CASE("file errors") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/model.json"), IoError);
}

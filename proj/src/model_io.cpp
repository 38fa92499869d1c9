#include "vng/model_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vng/error.hpp"

namespace vng {
namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw SchemaError(where + ": " + what);
}

void allow_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) bad(where, "expected an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) bad(where, "unknown field \"" + k + "\"");
}

const Json& field(const Json& j, const std::string& where, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(where, "expected a finite number");
    return v;
}

std::size_t count(const Json& j, const std::string& where) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) bad(where, "expected a nonnegative integer");
    if (j.is_number_integer() && j.get<long long>() < 0) bad(where, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

Vec vec(const Json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of numbers");
    Vec out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<Vec> matrix(const Json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of rows");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::string text(const Json& j, const std::string& where) {
    if (!j.is_string()) bad(where, "expected a string");
    return j.get<std::string>();
}

Units parse_units(const std::string& s) {
    if (s == "market_value") return Units::MarketValue;
    if (s == "physical") return Units::Physical;
    throw SchemaError("conventions.units: expected \"market_value\" or \"physical\", got \"" + s + "\"");
}

Json node_state(const ScenarioTree& tree, std::size_t id) {
    const auto label = tree.state_label(id);
    return label ? Json(*label) : Json(nullptr);
}

// Checks that entry i of a node list names node i of the tree.
void match_node(const Json& entry, const ScenarioTree& tree, std::size_t id, const std::string& where) {
    const std::size_t got = count(field(entry, where, "id"), where + ".id");
    if (got != id) bad(where, "expected node " + std::to_string(id) + ", found " + std::to_string(got));
    if (entry.contains("state") && !entry.at("state").is_null()) {
        const auto label = tree.state_label(id);
        if (!label || *label != text(entry.at("state"), where + ".state"))
            bad(where, "state does not match the tree built from the model");
    }
    if (entry.contains("parent")) {
        const auto& node = tree.node(id);
        const Json& p = entry.at("parent");
        const bool root = node.parent == kNoParent;
        if (root ? !p.is_null() : (p.is_null() || count(p, where + ".parent") != node.parent))
            bad(where, "parent does not match the tree built from the model");
    }
}

void check_horizon(const Json& j, const ScenarioTree& tree, const std::string& where) {
    if (j.contains("horizon") && count(j.at("horizon"), where + ".horizon") != tree.horizon())
        bad(where, "horizon does not match the tree");
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

ConeSpec cone_from_json(const Json& j) {
    const std::string where = "cone";
    const std::string family = text(field(j, where, "family"), where + ".family");
    try {
        if (family == "frictionless") {
            allow_keys(j, where, {"family", "returns"});
            return ConeSpec::frictionless(vec(field(j, where, "returns"), where + ".returns"));
        }
        if (family == "proportional_tc") {
            allow_keys(j, where, {"family", "returns", "lambda_plus", "lambda_minus"});
            return ConeSpec::proportional_tc(vec(field(j, where, "returns"), where + ".returns"),
                                             vec(field(j, where, "lambda_plus"), where + ".lambda_plus"),
                                             vec(field(j, where, "lambda_minus"), where + ".lambda_minus"));
        }
        if (family == "currency") {
            allow_keys(j, where, {"family", "rates"});
            return ConeSpec::currency(matrix(field(j, where, "rates"), where + ".rates"));
        }
    } catch (const DimensionError& e) {
        bad(where, e.what());
    } catch (const DomainError& e) {
        bad(where, e.what());
    }
    bad(where, "unknown family \"" + family + "\"");
}

Json cone_to_json(const ConeSpec& cone) {
    Json j;
    j["family"] = to_string(cone.family());
    switch (cone.family()) {
        case ConeFamily::Frictionless:
            j["returns"] = cone.returns();
            break;
        case ConeFamily::ProportionalTC:
            j["returns"] = cone.returns();
            j["lambda_plus"] = cone.lambda_plus();
            j["lambda_minus"] = cone.lambda_minus();
            break;
        case ConeFamily::Currency:
            j["rates"] = cone.rates();
            break;
    }
    return j;
}

void check_cone_coverage(const MarkovSpec& spec, const ConeTable& table) {
    const std::size_t k = spec.size();
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t v = 0; v < k; ++v)
            if (spec.transition[u][v] > 0.0 && !table.find(std::string_view(spec.states[u]), spec.states[v]))
                throw SchemaError("cones: no entry for transition " + ConeTable::key(spec.states[u], spec.states[v]));
    // An unlabeled root moves to the states reachable under initial * P.
    std::size_t support = 0;
    for (double p : spec.initial) support += p > 0.0;
    if (support <= 1) return;
    for (std::size_t v = 0; v < k; ++v) {
        double reach = 0.0;
        for (std::size_t u = 0; u < k; ++u) reach += spec.initial[u] * spec.transition[u][v];
        if (reach > 0.0 && !table.find(std::nullopt, spec.states[v]))
            throw SchemaError("cones: no \"*->" + spec.states[v] +
                              "\" entry for the first move from an unobserved initial state");
    }
}

ModelConfig model_from_json(const Json& j) {
    allow_keys(j, "model", {"markov", "cones", "conventions", "limits"});
    ModelConfig m;

    const Json& mk = field(j, "model", "markov");
    allow_keys(mk, "markov", {"states", "transition", "initial", "stationary"});
    const Json& states = field(mk, "markov", "states");
    if (!states.is_array() || states.empty()) bad("markov.states", "expected a nonempty array of labels");
    for (std::size_t i = 0; i < states.size(); ++i)
        m.markov.states.push_back(text(states[i], "markov.states[" + std::to_string(i) + "]"));
    m.markov.transition = matrix(field(mk, "markov", "transition"), "markov.transition");
    if (mk.contains("stationary")) {
        if (!mk.at("stationary").is_boolean()) bad("markov.stationary", "expected a boolean");
        m.markov.stationary = mk.at("stationary").get<bool>();
    }
    try {
        if (mk.contains("initial")) {
            m.markov.initial = vec(mk.at("initial"), "markov.initial");
        } else {
            m.markov.initial.assign(m.markov.size(), 1.0 / static_cast<double>(m.markov.size()));
            m.markov.validate();
            m.markov.initial = m.markov.stationary_distribution();
        }
        m.markov.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        bad("markov", e.what());
    }

    const Json& cones = field(j, "model", "cones");
    if (!cones.is_object() || cones.empty()) bad("cones", "expected a nonempty object keyed by \"u->v\"");
    for (const auto& [key, spec] : cones.items()) {
        const auto [from, to] = ConeTable::parse_key(key);
        for (const std::string& end : {from, to})
            if (end != "*") try {
                    (void)m.markov.index_of(end);
                } catch (const Error&) {
                    bad("cones." + key, "unknown state \"" + end + "\"");
                }
        try {
            m.cones.set(key, cone_from_json(spec));
        } catch (const SchemaError& e) {
            bad("cones." + key, e.what());
        } catch (const DimensionError& e) {
            bad("cones." + key, e.what());
        }
    }
    check_cone_coverage(m.markov, m.cones);

    bool any_currency = false;
    for (const auto& [key, c] : m.cones.entries()) any_currency |= c.family() == ConeFamily::Currency;
    m.units = any_currency ? Units::Physical : Units::MarketValue;
    if (j.contains("conventions")) {
        const Json& c = j.at("conventions");
        allow_keys(c, "conventions", {"units", "objective"});
        if (c.contains("units")) m.units = parse_units(text(c.at("units"), "conventions.units"));
        if (c.contains("objective")) m.objective = parse_objective(text(c.at("objective"), "conventions.objective"));
    }

    if (j.contains("limits")) {
        const Json& l = j.at("limits");
        allow_keys(l, "limits", {"node_limit", "tolerance", "seed", "validation_samples"});
        if (l.contains("node_limit")) m.limits.node_limit = count(l.at("node_limit"), "limits.node_limit");
        if (l.contains("tolerance")) {
            m.limits.tolerance = number(l.at("tolerance"), "limits.tolerance");
            if (!(m.limits.tolerance > 0.0)) bad("limits.tolerance", "must be positive");
        }
        if (l.contains("seed")) m.limits.seed = count(l.at("seed"), "limits.seed");
        if (l.contains("validation_samples"))
            m.limits.validation_samples = count(l.at("validation_samples"), "limits.validation_samples");
    }
    return m;
}

Json model_to_json(const ModelConfig& m) {
    Json j;
    j["markov"]["states"] = m.markov.states;
    j["markov"]["transition"] = m.markov.transition;
    j["markov"]["initial"] = m.markov.initial;
    j["markov"]["stationary"] = m.markov.stationary;
    j["cones"] = Json::object();
    for (const auto& [key, cone] : m.cones.entries()) j["cones"][key] = cone_to_json(cone);
    j["conventions"]["units"] = to_string(m.units);
    j["conventions"]["objective"] = to_string(m.objective);
    j["limits"]["node_limit"] = m.limits.node_limit;
    j["limits"]["tolerance"] = m.limits.tolerance;
    j["limits"]["seed"] = m.limits.seed;
    j["limits"]["validation_samples"] = m.limits.validation_samples;
    return j;
}

ModelConfig load_model(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return model_from_json(j);
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

Json to_json(const ValidationReport& r) {
    Json j;
    j["ok"] = r.ok();
    j["G1"] = r.g1_ok;
    j["G2"] = r.g2_ok;
    j["G3"] = r.g3_ok;
    j["G4"] = r.g4_ok;
    j["G5"] = r.g5_ok;
    j["M_bound"] = r.M_bound;
    j["gamma"] = r.gamma;
    j["violations"] = Json::array();
    for (const auto& v : r.violations) {
        Json w;
        w["condition"] = v.condition;
        w["transition"] = v.transition;
        w["a"] = v.a;
        w["b"] = v.b;
        if (!v.a2.empty() || !v.b2.empty()) {
            w["a2"] = v.a2;
            w["b2"] = v.b2;
        }
        w["detail"] = v.detail;
        j["violations"].push_back(std::move(w));
    }
    return j;
}

Json plan_to_json(const ContingentPlan& plan) {
    const ScenarioTree& tree = *plan.tree;
    Json j;
    j["horizon"] = tree.horizon();
    j["units"] = to_string(plan.units);
    j["nodes"] = Json::array();
    for (const auto& node : tree.nodes()) {
        Json e;
        e["id"] = node.id;
        e["parent"] = node.parent == kNoParent ? Json(nullptr) : Json(node.parent);
        e["depth"] = node.depth;
        e["state"] = node_state(tree, node.id);
        e["x"] = plan.portfolio[node.id];
        j["nodes"].push_back(std::move(e));
    }
    return j;
}

ContingentPlan plan_from_json(const Json& j, std::shared_ptr<const ScenarioTree> tree) {
    check_horizon(j, *tree, "plan");
    const Json& nodes = field(j, "plan", "nodes");
    if (!nodes.is_array() || nodes.size() != tree->size())
        bad("plan.nodes", "expected " + std::to_string(tree->size()) + " nodes");
    ContingentPlan plan;
    plan.tree = tree;
    if (j.contains("units")) plan.units = parse_units(text(j.at("units"), "plan.units"));
    plan.portfolio.resize(tree->size());
    for (std::size_t id = 0; id < tree->size(); ++id) {
        const std::string where = "plan.nodes[" + std::to_string(id) + "]";
        match_node(nodes[id], *tree, id, where);
        plan.portfolio[id] = vec(field(nodes[id], where, "x"), where + ".x");
    }
    return plan;
}

Json dual_to_json(const DualPlan& dual) {
    const ScenarioTree& tree = *dual.tree;
    Json j;
    j["horizon"] = tree.horizon();
    j["nodes"] = Json::array();
    for (const auto& node : tree.nodes()) {
        if (node.parent == kNoParent) continue;
        Json e;
        e["id"] = node.id;
        e["state"] = node_state(tree, node.id);
        e["p"] = dual.prices[node.id];
        j["nodes"].push_back(std::move(e));
    }
    j["terminal"] = Json::array();
    for (std::size_t id = tree.level_begin(tree.horizon()); id < tree.level_end(tree.horizon()); ++id) {
        Json e;
        e["id"] = id;
        e["expectation"] = dual.terminal[id];
        j["terminal"].push_back(std::move(e));
    }
    return j;
}

DualPlan dual_from_json(const Json& j, std::shared_ptr<const ScenarioTree> tree) {
    check_horizon(j, *tree, "dual");
    DualPlan dual;
    dual.tree = tree;
    dual.prices.assign(tree->size(), Vec{});
    dual.terminal.assign(tree->size(), Vec{});

    const Json& nodes = field(j, "dual", "nodes");
    if (!nodes.is_array() || nodes.size() + 1 != tree->size())
        bad("dual.nodes", "expected " + std::to_string(tree->size() - 1) + " non-root nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "dual.nodes[" + std::to_string(i) + "]";
        match_node(nodes[i], *tree, i + 1, where);
        dual.prices[i + 1] = vec(field(nodes[i], where, "p"), where + ".p");
    }

    const Json& term = field(j, "dual", "terminal");
    const std::size_t first = tree->level_begin(tree->horizon());
    const std::size_t leaves = tree->level_end(tree->horizon()) - first;
    if (!term.is_array() || term.size() != leaves)
        bad("dual.terminal", "expected " + std::to_string(leaves) + " leaves");
    for (std::size_t i = 0; i < leaves; ++i) {
        const std::string where = "dual.terminal[" + std::to_string(i) + "]";
        match_node(term[i], *tree, first + i, where);
        dual.terminal[first + i] = vec(field(term[i], where, "expectation"), where + ".expectation");
    }
    return dual;
}

Json to_json(const TreeSolveResult& r, Objective objective) {
    Json j;
    j["objective"] = to_string(objective);
    j["value"] = r.objective;
    j["kkt_residual"] = r.kkt_residual;
    j["iterations"] = r.iterations;
    j["plan"] = plan_to_json(r.plan);
    j["dual"] = dual_to_json(r.dual);
    return j;
}

Json to_json(const EquilibriumResult& r, const MarkovSpec& spec) {
    Json j;
    j["states"] = spec.states;
    j["stationary"] = r.stationary;
    j["log_growth"] = r.log_growth;
    j["x"] = r.strategy.x;
    j["alpha"] = r.strategy.alpha;
    j["prices"] = r.prices;
    j["certificate_residual"] = r.certificate_residual;
    j["prices_feasible"] = r.prices_feasible;
    return j;
}

EquilibriumResult equilibrium_from_json(const Json& j, const MarkovSpec& spec) {
    const std::string where = "equilibrium";
    const Json& states = field(j, where, "states");
    if (!states.is_array() || states.size() != spec.size()) bad(where + ".states", "state count differs from the model");
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (text(states[i], where + ".states") != spec.states[i])
            bad(where + ".states", "labels differ from the model");

    EquilibriumResult r;
    r.strategy.x = matrix(field(j, where, "x"), where + ".x");
    r.strategy.alpha = vec(field(j, where, "alpha"), where + ".alpha");
    if (j.contains("prices")) r.prices = matrix(j.at("prices"), where + ".prices");
    r.stationary = j.contains("stationary") ? vec(j.at("stationary"), where + ".stationary")
                                            : spec.stationary_distribution();
    if (j.contains("log_growth")) r.log_growth = number(j.at("log_growth"), where + ".log_growth");
    if (j.contains("certificate_residual"))
        r.certificate_residual = number(j.at("certificate_residual"), where + ".certificate_residual");
    if (j.contains("prices_feasible")) r.prices_feasible = j.at("prices_feasible").get<bool>();
    if (r.strategy.x.size() != spec.size() || r.strategy.alpha.size() != spec.size())
        bad(where, "one portfolio and one growth factor per state required");
    return r;
}

Json to_json(const CertificateReport& r, bool with_nodes) {
    Json j;
    j["pass"] = r.pass;
    j["support_residual"] = r.support_residual;
    j["dual_cone_residual"] = r.dual_cone_residual;
    j["supermartingale_defect"] = r.supermartingale_defect;
    j["self_financing"] = r.self_financing;
    j["competitors_tested"] = r.competitors_tested;
    if (with_nodes) {
        j["nodes"] = Json::array();
        for (const auto& d : r.nodes) {
            Json e;
            e["id"] = d.node;
            e["support"] = d.support;
            e["dual_cone"] = d.dual_cone;
            e["defect"] = d.defect;
            j["nodes"].push_back(std::move(e));
        }
    }
    return j;
}

}  // namespace vng

// Command-line front end. Exit codes: 0 pass, 1 domain failure, 2 usage,
// schema or I/O error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "vng/certify.hpp"
#include "vng/dominance.hpp"
#include "vng/equilibrium.hpp"
#include "vng/error.hpp"
#include "vng/model_io.hpp"
#include "vng/tree_solver.hpp"
#include "vng/validation.hpp"

namespace {

using namespace vng;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

vng::Vec parse_list(const std::string& s) {
    vng::Vec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw SchemaError("--x0: cannot parse \"" + item + "\"");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw SchemaError("--x0: cannot parse \"" + item + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw SchemaError("--x0: empty list");
    return out;
}

void emit(const Json& doc, const std::string& out) {
    if (out.empty()) std::cout << doc.dump(2) << '\n';
    else write_json_file(out, doc);
}

std::shared_ptr<const ScenarioTree> build_tree(const ModelConfig& m, std::size_t horizon) {
    return std::make_shared<const ScenarioTree>(ScenarioTree::build(m.markov, horizon, m.limits.node_limit));
}

// A plan or dual file may be a bare document or a solve-tree result holding
// both under "plan" and "dual".
const Json& section(const Json& doc, const char* key) { return doc.contains(key) ? doc.at(key) : doc; }

std::size_t horizon_of(const Json& plan) {
    if (!plan.contains("horizon") || !plan.at("horizon").is_number_unsigned())
        throw SchemaError("plan: missing field \"horizon\"");
    return plan.at("horizon").get<std::size_t>();
}

struct ValidateArgs {
    std::string model;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_validate(const ValidateArgs& a) {
    const ModelConfig m = load_model(a.model);
    ValidationOptions opt;
    opt.samples = a.samples ? a.samples : m.limits.validation_samples;
    opt.seed = a.seed_set ? a.seed : m.limits.seed;
    const ValidationReport r = validate_assumptions(m.cones, opt);
    std::cout << to_json(r).dump(2) << '\n';
    return r.ok() ? kPass : kFail;
}

struct SolveTreeArgs {
    std::string model, x0, objective, out;
    std::size_t horizon = 0;
};

int cmd_solve_tree(const SolveTreeArgs& a) {
    const ModelConfig m = load_model(a.model);
    const ValidationReport v = validate_assumptions(m.cones, {m.limits.validation_samples, m.limits.seed});
    if (!v.ok()) {
        std::cerr << "model fails validation\n" << to_json(v).dump(2) << '\n';
        return kFail;
    }
    TreeSolveOptions opt;
    opt.objective = a.objective.empty() ? m.objective : parse_objective(a.objective);
    opt.tolerance = m.limits.tolerance;
    const auto tree = build_tree(m, a.horizon);
    const Vec x0 = parse_list(a.x0);
    if (x0.size() != m.cones.n())
        throw DimensionError("--x0 has " + std::to_string(x0.size()) + " entries, the model has " +
                             std::to_string(m.cones.n()) + " assets");
    TreeSolveResult r = solve_tree_log_optimal(tree, m.cones, x0, opt);
    r.plan.units = m.units;
    const Json doc = to_json(r, opt.objective);
    Json summary;
    summary["objective"] = doc["objective"];
    summary["value"] = doc["value"];
    summary["kkt_residual"] = doc["kkt_residual"];
    summary["iterations"] = doc["iterations"];
    summary["nodes"] = tree->size();
    if (a.out.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        write_json_file(a.out, doc);
        std::cout << summary.dump(2) << '\n';
    }
    return kPass;
}

struct StationaryArgs {
    std::string model, out;
    std::size_t starts = 32;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_solve_stationary(const StationaryArgs& a) {
    const ModelConfig m = load_model(a.model);
    EquilibriumOptions opt;
    opt.starts = a.starts;
    opt.seed = a.seed_set ? a.seed : m.limits.seed;
    const EquilibriumResult r = solve_stationary_equilibrium(m.markov, m.cones, opt);
    const Json doc = to_json(r, m.markov);
    if (a.out.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        write_json_file(a.out, doc);
        Json summary;
        summary["log_growth"] = r.log_growth;
        summary["certificate_residual"] = r.certificate_residual;
        summary["prices_feasible"] = r.prices_feasible;
        std::cout << summary.dump(2) << '\n';
    }
    return kPass;
}

struct CertifyArgs {
    std::string model, plan, dual, out;
    double tol = 1e-6;
    double defect_tol = 1e-8;
    std::size_t competitors = 100;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_certify(const CertifyArgs& a) {
    const ModelConfig m = load_model(a.model);
    const Json plan_doc = read_json_file(a.plan);
    const Json dual_doc = a.dual == a.plan ? plan_doc : read_json_file(a.dual);
    const Json& pj = section(plan_doc, "plan");
    const auto tree = build_tree(m, horizon_of(pj));
    const ContingentPlan plan = plan_from_json(pj, tree);
    const DualPlan dual = dual_from_json(section(dual_doc, "dual"), tree);
    plan.check(m.cones.n());
    dual.check(m.cones.n());

    CertifyOptions opt;
    opt.support_tolerance = a.tol;
    opt.dual_tolerance = a.tol;
    opt.defect_tolerance = a.defect_tol;
    opt.competitors = a.competitors;
    opt.seed = a.seed_set ? a.seed : m.limits.seed;
    const CertificateReport r = check_rapid(plan, dual, m.cones, opt);
    std::cout << to_json(r, false).dump(2) << '\n';
    if (!a.out.empty()) write_json_file(a.out, to_json(r, true));
    return r.pass ? kPass : kFail;
}

struct SimulateArgs {
    std::string model, equilibrium, out;
    std::size_t paths = 200, length = 500, competitors = 8;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_simulate(const SimulateArgs& a) {
    const ModelConfig m = load_model(a.model);
    const EquilibriumResult eq = equilibrium_from_json(read_json_file(a.equilibrium), m.markov);
    eq.strategy.check(m.markov.size(), m.cones.n());
    DominanceOptions opt;
    opt.paths = a.paths;
    opt.length = a.length;
    opt.random_competitors = a.competitors;
    opt.seed = a.seed_set ? a.seed : m.limits.seed;
    const DominanceReport r = asymptotic_dominance(eq, m.markov, m.cones, opt);
    if (a.out.empty()) {
        write_dominance_csv(std::cout, r);
    } else {
        std::ofstream f(a.out);
        if (!f) throw IoError("cannot write " + a.out);
        write_dominance_csv(f, r);
        if (!f) throw IoError("write failed: " + a.out);
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Growth-optimal strategies and rapid-path certificates for markets with frictions"};
    app.require_subcommand(1);

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "check the cone assumptions of a model");
    validate->add_option("--model", va.model, "model JSON")->required();
    validate->add_option("--samples", va.samples, "random members per cone (default: limits.validation_samples)");
    validate->add_option("--seed", va.seed, "sampling seed")->each([&](const std::string&) { va.seed_set = true; });

    SolveTreeArgs ta;
    auto* solve_tree = app.add_subcommand("solve-tree", "log-optimal plan and dual on a scenario tree");
    solve_tree->add_option("--model", ta.model, "model JSON")->required();
    solve_tree->add_option("--horizon", ta.horizon, "tree depth T")->required();
    solve_tree->add_option("--x0", ta.x0, "initial portfolio, comma separated")->required();
    solve_tree->add_option("--objective", ta.objective, "wealth or liquidation (default: from the model)")
        ->check(CLI::IsMember({"wealth", "liquidation"}));
    solve_tree->add_option("--out", ta.out, "result JSON (default: stdout)");

    StationaryArgs sa;
    auto* stationary = app.add_subcommand("solve-stationary", "balanced growth-optimal strategy and prices");
    stationary->add_option("--model", sa.model, "model JSON")->required();
    stationary->add_option("--starts", sa.starts, "multistart count");
    stationary->add_option("--seed", sa.seed, "multistart seed")->each([&](const std::string&) { sa.seed_set = true; });
    stationary->add_option("--out", sa.out, "equilibrium JSON (default: stdout)");

    CertifyArgs ca;
    auto* certify = app.add_subcommand("certify", "verify that a dual path supports a plan");
    certify->add_option("--model", ca.model, "model JSON")->required();
    certify->add_option("--plan", ca.plan, "plan JSON or solve-tree result")->required();
    certify->add_option("--dual", ca.dual, "dual JSON or solve-tree result")->required();
    certify->add_option("--tol", ca.tol, "support and dual-cone tolerance");
    certify->add_option("--defect-tol", ca.defect_tol, "supermartingale defect tolerance");
    certify->add_option("--competitors", ca.competitors, "random competitors");
    certify->add_option("--seed", ca.seed, "competitor seed")->each([&](const std::string&) { ca.seed_set = true; });
    certify->add_option("--out", ca.out, "full report with per-node diagnostics");

    SimulateArgs ma;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison against competitors");
    simulate->add_option("--model", ma.model, "model JSON")->required();
    simulate->add_option("--equilibrium", ma.equilibrium, "solve-stationary output")->required();
    simulate->add_option("--paths", ma.paths, "number of paths N");
    simulate->add_option("--length", ma.length, "transitions per path L");
    simulate->add_option("--competitors", ma.competitors, "random competitors");
    simulate->add_option("--seed", ma.seed, "path seed")->each([&](const std::string&) { ma.seed_set = true; });
    simulate->add_option("--out", ma.out, "CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate) return cmd_validate(va);
        if (*solve_tree) return cmd_solve_tree(ta);
        if (*stationary) return cmd_solve_stationary(sa);
        if (*certify) return cmd_certify(ca);
        if (*simulate) return cmd_simulate(ma);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kFail;
    } catch (const DomainError& e) {
        std::cerr << "domain failure: " << e.what() << '\n';
        return kFail;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kUsage;
    } catch (const DimensionError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

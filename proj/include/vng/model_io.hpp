#pragma once

// JSON model files and result documents.
//
// Model file:
//   {
//     "markov": {"states": ["U", "D"], "transition": [[0.5, 0.5], [0.5, 0.5]],
//                "initial": [0.5, 0.5], "stationary": true},
//     "cones": {"*->U": {"family": "frictionless", "returns": [1, 2]},
//               "*->D": {"family": "proportional_tc", "returns": [1, 0.5],
//                        "lambda_plus": [0.01, 0.01], "lambda_minus": [0.01, 0.01]},
//               "A->B": {"family": "currency", "rates": [[1, 0.9], [0.9, 1]]}},
//     "conventions": {"units": "market_value", "objective": "wealth"},
//     "limits": {"node_limit": 1000000, "tolerance": 1e-8, "seed": 20240601,
//                "validation_samples": 1000}
//   }
// "initial" defaults to the stationary distribution; "conventions" and
// "limits" are optional.

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"

#include "vng/certify.hpp"
#include "vng/equilibrium.hpp"
#include "vng/tree_solver.hpp"
#include "vng/validation.hpp"

namespace vng {

using Json = nlohmann::ordered_json;

struct Limits {
    std::size_t node_limit = 1'000'000;
    double tolerance = 1e-8;
    std::uint64_t seed = 20240601;
    std::size_t validation_samples = 1000;
};

struct ModelConfig {
    MarkovSpec markov;
    ConeTable cones;
    Units units = Units::MarketValue;
    Objective objective = Objective::Wealth;
    Limits limits;
};

/// Throws IoError when the file cannot be read, SchemaError on bad JSON.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

ConeSpec cone_from_json(const Json& j);
Json cone_to_json(const ConeSpec& cone);

/// Parses and checks a model: the chain is valid and every
/// positive-probability transition resolves to a cone. Throws SchemaError.
ModelConfig model_from_json(const Json& j);
Json model_to_json(const ModelConfig& model);
ModelConfig load_model(const std::string& path);

/// Throws SchemaError when a reachable transition has no cone.
void check_cone_coverage(const MarkovSpec& spec, const ConeTable& table);

Json to_json(const ValidationReport& report);

/// Nodes in breadth-first order: {"id", "parent", "depth", "state", "x"}.
Json plan_to_json(const ContingentPlan& plan);
/// Reads a plan onto `tree`, checking node ids, parents and states.
ContingentPlan plan_from_json(const Json& j, std::shared_ptr<const ScenarioTree> tree);

/// {"nodes": [{"id", "p"}...], "terminal": [{"id", "expectation"}...]}
Json dual_to_json(const DualPlan& dual);
DualPlan dual_from_json(const Json& j, std::shared_ptr<const ScenarioTree> tree);

Json to_json(const TreeSolveResult& result, Objective objective);

Json to_json(const EquilibriumResult& result, const MarkovSpec& spec);
EquilibriumResult equilibrium_from_json(const Json& j, const MarkovSpec& spec);

Json to_json(const CertificateReport& report, bool with_nodes = true);

}  // namespace vng

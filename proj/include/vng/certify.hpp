#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vng/cone_table.hpp"
#include "vng/plans.hpp"

namespace vng {

struct CertifyOptions {
    double support_tolerance = 1e-6;
    double dual_tolerance = 1e-6;
    double defect_tolerance = 1e-8;
    std::size_t competitors = 100;  // random competitors on top of the fixed ones
    std::uint64_t seed = 20240601;
    std::size_t threads = 0;        // 0: thread_limit()
};

struct NodeDiagnostic {
    std::size_t node = 0;
    double support = 0.0;    // |p_t . x_{t-1} - 1|
    double dual_cone = 0.0;  // normalized dual-cone residual of (p_t, E_t p_{t+1})
    double defect = 0.0;     // worst normalized supermartingale defect over competitors
};

struct CertificateReport {
    double support_residual = 0.0;
    double dual_cone_residual = 0.0;
    /// max over competitors and nodes of
    ///   (E_t(p_{t+1}.y_t) - p_t.y_{t-1}) / max(p_t.y_{t-1}, E_t(p_{t+1}.y_t)).
    double supermartingale_defect = 0.0;
    bool self_financing = true;
    std::size_t competitors_tested = 0;
    bool pass = false;
    std::vector<NodeDiagnostic> nodes;
};

/// E_t(p_{t+1}.y_t) - p_t.y_{t-1} at every node of depth >= 1 (root entry 0).
std::vector<double> supermartingale_defect(const DualPlan& dual, const ContingentPlan& y);

/// Self-financing competitors on the plan's tree: the plan itself, the plan
/// with 10% disposed, buy-and-hold, one all-in plan per asset (extreme rays of
/// every cone slice) and `random_count` plans built from random feasible
/// rebalances. Reproducible from `seed`.
std::vector<ContingentPlan> make_competitors(const ContingentPlan& plan, const ConeTable& table,
                                             std::size_t random_count, std::uint64_t seed);

CertificateReport check_rapid(const ContingentPlan& plan, const DualPlan& dual, const ConeTable& table,
                              const CertifyOptions& options = {});

}  // namespace vng

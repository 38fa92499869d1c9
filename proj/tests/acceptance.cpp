// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "support.hpp"
#include "vng/certify.hpp"
#include "vng/dominance.hpp"
#include "vng/equilibrium.hpp"
#include "vng/tree_solver.hpp"
#include "vng/validation.hpp"

using namespace vng;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < time_limit;
    const bool pass = o.ok && in_time;
    failures += !pass;
    std::printf("criterion %d: %s  %s | %s | %.2fs (limit %.0fs)\n", id, pass ? "PASS" : "FAIL", title,
                o.detail.c_str(), secs, time_limit);
    std::fflush(stdout);
}

Outcome kelly_recovery() {
    const auto r = solve_stationary_equilibrium(vt::kelly_chain(), vt::kelly_table());
    double xerr = 0.0;
    for (const auto& x : r.strategy.x) xerr = std::max({xerr, std::abs(x[0] - 0.5), std::abs(x[1] - 0.5)});
    const double target = 0.5 * std::log(9.0 / 8.0);
    const auto [w, grid] = vt::kelly_grid(1e-3);
    const bool ok = xerr <= 1e-3 && std::abs(r.log_growth - target) <= 1e-4 && std::abs(w - 0.5) <= 1e-3;
    return {ok, fmt("max|x-0.5|=%.2e log_growth=%.9f target=%.9f grid(h=1e-3)=%.9f", xerr, r.log_growth, target, grid)};
}

Outcome friction_monotonicity() {
    const double grid[] = {0.0, 1e-4, 5e-3, 1e-2, 5e-2};
    std::string values;
    double prev = 1e300, at_small = 0.0;
    bool monotone = true;
    for (double lambda : grid) {
        const double g = solve_stationary_equilibrium(vt::kelly_chain(), vt::kelly_table(lambda)).log_growth;
        monotone = monotone && g <= prev;
        prev = g;
        if (lambda == 1e-4) at_small = g;
        values += fmt("%s%.7f", values.empty() ? "" : ",", g);
    }
    const double dev = std::abs(at_small - 0.0588915);
    return {monotone && dev <= 1e-3, fmt("log_growth over lambda grid = [%s] monotone=%d |g(1e-4)-0.0588915|=%.2e",
                                         values.c_str(), monotone, dev)};
}

Outcome rapid_certificate() {
    CounterRng rng(20240601);
    double worst_support = 0.0, worst_cone = 0.0, worst_defect = 0.0;
    int instances = 0, passed = 0;
    for (int fam = 0; fam < 3; ++fam) {
        for (std::size_t n : {2, 3}) {
            for (std::size_t depth : {3, 5}) {
                MarkovSpec spec;
                spec.states = {"A", "B"};
                const double p = 0.2 + 0.6 * rng.uniform(), q = 0.2 + 0.6 * rng.uniform();
                spec.transition = {{p, 1.0 - p}, {q, 1.0 - q}};
                spec.initial = {1.0, 0.0};
                ConeTable table;
                for (const char* key : {"A->A", "A->B", "B->A", "B->B"})
                    table.set(key, fam == 0   ? vt::random_frictionless(rng, n)
                                   : fam == 1 ? vt::random_tc(rng, n)
                                              : vt::random_currency(rng, n));
                const auto tree = vt::tree_of(spec, depth);
                const auto r = solve_tree_log_optimal(tree, table, vt::random_simplex(rng, n));
                CertifyOptions o;
                o.competitors = 100;
                o.seed = 1000 + instances;
                const auto rep = check_rapid(r.plan, r.dual, table, o);
                ++instances;
                passed += rep.pass && rep.support_residual <= 1e-6 && rep.dual_cone_residual <= 1e-6 &&
                          rep.supermartingale_defect <= 1e-8;
                worst_support = std::max(worst_support, rep.support_residual);
                worst_cone = std::max(worst_cone, rep.dual_cone_residual);
                worst_defect = std::max(worst_defect, rep.supermartingale_defect);
            }
        }
    }
    return {passed == instances,
            fmt("%d/%d trees certified (3 families, n<=3, branching 2, depth<=5, 100 random competitors); worst "
                "support=%.2e dual_cone=%.2e defect=%.2e",
                passed, instances, worst_support, worst_cone, worst_defect)};
}

Outcome dual_oracle_equivalence() {
    CounterRng rng(4);
    int disagreements = 0, inside = 0, total = 0;
    for (int fam = 0; fam < 2; ++fam) {
        for (int k = 0; k < 1000; ++k) {
            const std::size_t n = 2 + k % 3;
            const ConeSpec cone = fam == 0 ? vt::random_frictionless(rng, n) : vt::random_currency(rng, n);
            const Vec c = vt::random_box(rng, n, 2.5), d = vt::random_box(rng, n);
            const bool lp = dual_contains(cone, c, d, 1e-9, DualMethod::Lp);
            const bool cf = dual_contains(cone, c, d, 1e-9, DualMethod::ClosedForm);
            disagreements += lp != cf;
            inside += lp;
            ++total;
        }
    }
    return {disagreements == 0,
            fmt("%d disagreements over %d samples (%d inside the dual cone), n in 2..4, tol 1e-9", disagreements,
                total, inside)};
}

Outcome cone_axioms() {
    CounterRng rng(5);
    int failures_seen = 0;
    const int samples = 10000;
    for (int fam = 0; fam < 3; ++fam) {
        const std::size_t n = 3;
        const ConeSpec cone = fam == 0 ? vt::random_frictionless(rng, n)
                              : fam == 1 ? vt::random_tc(rng, n)
                                         : vt::random_currency(rng, n);
        const auto rep = validate_assumptions(ConeTable::uniform(cone), {static_cast<std::size_t>(samples), 77});
        failures_seen += !(rep.g1_ok && rep.g2_ok && rep.g4_ok && rep.g5_ok);
        for (int k = 0; k < samples; ++k) {
            const auto m1 = sample_member(cone, rng, k % 3 == 0);
            const auto m2 = sample_member(cone, rng);
            const double t = 0.01 + 100.0 * rng.uniform();
            Vec a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 * (m1.a[i] + m2.a[i]), b[i] = 0.5 * (m1.b[i] + m2.b[i]);
            failures_seen += !contains(cone, scaled(m1.a, t), scaled(m1.b, t));
            failures_seen += !contains(cone, a, b);
            failures_seen += sum(m1.b) > rep.M_bound * sum(m1.a) * (1 + 1e-9) + 1e-12;
        }
    }
    ConeTable degenerate = ConeTable::uniform(ConeSpec::proportional_tc({1.0, 2.0}, {0.1, 0.1}, {1.0, 0.1}));
    const auto rep = validate_assumptions(degenerate);
    bool witnessed = false;
    for (const auto& v : rep.violations) witnessed = witnessed || (v.condition == "G5" && confirm_violation(degenerate, rep, v));
    const bool rejected = !rep.ok() && !rep.g5_ok && witnessed;
    return {failures_seen == 0 && rejected,
            fmt("%d axiom failures over 3x%d samples (conic, convex, free disposal, G1, G2, G5); degenerate "
                "lambda-=1 rejected=%d with confirmed G5 witness=%d",
                failures_seen, samples, !rep.ok(), witnessed)};
}

Outcome asymptotic_dominance_check() {
    const auto spec = vt::kelly_chain();
    const auto table = vt::kelly_table();
    const auto eq = solve_stationary_equilibrium(spec, table);
    DominanceOptions o;
    o.paths = 200;
    o.length = 500;
    o.seed = 20240601;
    const auto r = asymptotic_dominance(eq, spec, table, o);
    const CompetitorStats* risky = nullptr;
    bool property_b = true;
    double worst = 1e300;
    for (const auto& c : r.competitors) {
        if (c.name == "all_in_1") risky = &c;
        property_b = property_b && c.growth_x_mean >= c.growth_y_mean - 1e-3;
        worst = std::min(worst, c.growth_x_mean - c.growth_y_mean);
    }
    if (!risky) return {false, "all-in-risky competitor missing"};
    const double z = std::abs(risky->gap_mean - 0.0588915) / risky->gap_se;
    return {z <= 3.0 && property_b,
            fmt("all-in-risky gap=%.5f se=%.5f (|gap-0.0588915|=%.2f se); min growth_x-growth_y over %zu "
                "competitors=%.2e",
                risky->gap_mean, risky->gap_se, z, r.competitors.size(), worst)};
}

Outcome non_rapid_rejection() {
    const auto spec = vt::kelly_chain();
    const auto table = vt::kelly_table();
    BalancedStrategy bad;
    bad.x = {{0.9, 0.1}, {0.9, 0.1}};
    bad.alpha = balanced_growth(bad.x, spec, table);
    const auto pe = extract_equilibrium_prices(bad, spec, table, 1e-6);
    const auto opt = solve_stationary_equilibrium(spec, table);
    return {!pe.feasible && opt.prices_feasible,
            fmt("x=(0.9,0.1): residual=%.3e feasible=%d; optimum: residual=%.3e feasible=%d", pe.residual,
                pe.feasible, opt.certificate_residual, opt.prices_feasible)};
}

}  // namespace

int main() {
    criterion(1, "Kelly recovery", 10, kelly_recovery);
    criterion(2, "friction monotonicity and continuity", 60, friction_monotonicity);
    criterion(3, "rapid certificate", 120, rapid_certificate);
    criterion(4, "dual-cone oracle equivalence", 30, dual_oracle_equivalence);
    criterion(5, "cone axiom suite", 30, cone_axioms);
    criterion(6, "asymptotic dominance", 60, asymptotic_dominance_check);
    criterion(7, "non-rapid rejection", 10, non_rapid_rejection);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

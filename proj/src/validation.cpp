#include "vng/validation.hpp"

#include <algorithm>
#include <cmath>

#include "vng/error.hpp"

namespace vng {
namespace {

Vec unit(std::size_t n, std::size_t i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    return e;
}

Vec random_vec(std::size_t n, CounterRng& rng) {
    Vec v(n);
    for (double& x : v) x = rng.uniform();
    return v;
}

}  // namespace

MemberSample sample_member(const ConeSpec& cone, CounterRng& rng, bool on_boundary) {
    const std::size_t n = cone.n();
    MemberSample s;
    s.a = random_vec(n, rng);
    Vec dir = random_vec(n, rng);
    if (sum(dir) <= 0.0) dir.assign(n, 1.0);
    const double t = on_boundary ? 1.0 : rng.uniform();
    s.b = scaled(dir, t * max_growth(cone, s.a, dir));
    return s;
}

double growth_bound(const ConeSpec& cone) {
    switch (cone.family()) {
        case ConeFamily::Frictionless:
        case ConeFamily::ProportionalTC:
            // Trading never adds value, so sum(b) <= R.a <= max(R)|a|.
            return *std::max_element(cone.returns().begin(), cone.returns().end());
        case ConeFamily::Currency: {
            // All of a placed in the currency with the best conversion.
            double m = 0.0;
            for (const auto& row : cone.rates()) m = std::max(m, *std::max_element(row.begin(), row.end()));
            return m;
        }
    }
    return 0.0;
}

double unit_growth(const ConeSpec& cone) {
    const std::size_t n = cone.n();
    const Vec e(n, 1.0);
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) g = std::min(g, max_growth(cone, unit(n, i), e));
    return g;
}

ValidationReport validate_assumptions(const ConeTable& table, const ValidationOptions& options) {
    if (table.empty()) throw DimensionError("validate_assumptions: empty cone table");
    const std::size_t n = table.n();

    ValidationReport rep;
    rep.gamma = std::numeric_limits<double>::infinity();
    for (const auto& [key, cone] : table.entries()) rep.M_bound = std::max(rep.M_bound, growth_bound(cone));

    std::uint64_t stream = 0;
    for (const auto& [key, cone] : table.entries()) {
        const Vec zero(n, 0.0);
        const Vec e(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec ei = unit(n, i);
            if (!contains(cone, ei, zero)) {
                rep.g1_ok = false;
                rep.violations.push_back({"G1", key, ei, zero, {}, {}, "unit position cannot be discarded"});
            }
            const double gi = max_growth(cone, ei, e);
            rep.gamma = std::min(rep.gamma, gi);
            if (!(gi > kGammaFloor)) {
                rep.g5_ok = false;
                const double probe = std::max(1e-6, 10.0 * gi);
                rep.violations.push_back({"G5", key, ei, scaled(e, probe), {}, {},
                                          "asset " + std::to_string(i) +
                                              " cannot be converted into a positive amount of every asset"});
            }
        }

        CounterRng rng(options.seed, stream++);
        for (std::size_t k = 0; k < options.samples; ++k) {
            const auto m = sample_member(cone, rng, k % 4 == 0);
            if (sum(m.b) > rep.M_bound * sum(m.a) * (1.0 + 1e-9) + 1e-12) {
                rep.g2_ok = false;
                rep.violations.push_back({"G2", key, m.a, m.b, {}, {}, "|b| exceeds M|a|"});
            }
            Vec a2 = m.a, b2 = m.b;
            for (double& x : a2) x += rng.uniform();
            for (double& x : b2) x *= rng.uniform();
            if (!contains(cone, a2, b2)) {
                rep.g4_ok = false;
                rep.violations.push_back({"G4", key, m.a, m.b, a2, b2, "dominated pair is not feasible"});
            }
        }
    }
    if (!std::isfinite(rep.gamma)) rep.gamma = 0.0;
    rep.g3_ok = rep.g5_ok;
    return rep;
}

bool confirm_violation(const ConeTable& table, const ValidationReport& report, const Violation& v) {
    const auto it = table.entries().find(v.transition);
    if (it == table.entries().end()) return false;
    const ConeSpec& cone = it->second;
    if (v.condition == "G1" || v.condition == "G5") return !contains(cone, v.a, v.b);
    if (v.condition == "G2") return contains(cone, v.a, v.b) && sum(v.b) > report.M_bound * sum(v.a) * (1.0 + 1e-9);
    if (v.condition == "G4") return contains(cone, v.a, v.b) && !contains(cone, v.a2, v.b2);
    return false;
}

}  // namespace vng

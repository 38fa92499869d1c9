#include "vng/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vng/error.hpp"
#include "vng/lp.hpp"

namespace vng {
namespace {

void require_size(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n)
        throw DimensionError(std::string(what) + ": expected " + std::to_string(n) +
                             " coordinates, got " + std::to_string(v.size()));
}

void require_nonnegative(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0)
            throw DomainError(std::string(what) + ": coordinates must be finite and nonnegative");
    }
}

void check_pair(const ConeSpec& cone, std::span<const double> a, std::span<const double> b,
                const char* what) {
    require_size(a, cone.n(), what);
    require_size(b, cone.n(), what);
    require_nonnegative(a, what);
    require_nonnegative(b, what);
}

double tc_excess(const ConeSpec& cone, std::span<const double> a, std::span<const double> b) {
    const auto& R = cone.returns();
    const auto& lp = cone.lambda_plus();
    const auto& lm = cone.lambda_minus();
    double s = 0.0;
    for (std::size_t i = 0; i < cone.n(); ++i) {
        const double d = b[i] - R[i] * a[i];
        s += std::max((1.0 + lp[i]) * d, (1.0 - lm[i]) * d);
    }
    return s;
}

// Largest alpha with sum_i h_i(alpha * dir_i - R_i a_i) <= 0, where h_i has
// slope 1+l+ on the positive side and 1-l- on the negative side. The sum is
// continuous, piecewise linear and nondecreasing in alpha.
double tc_max_growth(const ConeSpec& cone, std::span<const double> a, std::span<const double> dir) {
    const auto& R = cone.returns();
    const auto& lp = cone.lambda_plus();
    const auto& lm = cone.lambda_minus();
    const std::size_t n = cone.n();

    auto g = [&](double alpha) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = alpha * dir[i] - R[i] * a[i];
            s += d > 0.0 ? (1.0 + lp[i]) * d : (1.0 - lm[i]) * d;
        }
        return s;
    };

    std::vector<double> breaks;
    for (std::size_t i = 0; i < n; ++i)
        if (dir[i] > 0.0) breaks.push_back(R[i] * a[i] / dir[i]);
    std::sort(breaks.begin(), breaks.end());

    double lo = 0.0;
    double g_lo = g(0.0);
    for (double bp : breaks) {
        if (bp <= lo) continue;
        const double g_bp = g(bp);
        if (g_bp > 0.0) return lo + (-g_lo) * (bp - lo) / (g_bp - g_lo);
        lo = bp;
        g_lo = g_bp;
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += (1.0 + lp[i]) * dir[i];
    return lo + (-g_lo) / slope;
}

// Builds the LP  max alpha  over (z, alpha) for a fixed a and direction.
lp::Problem growth_problem(const LiftedCone& L, std::span<const double> a,
                           std::span<const double> dir) {
    const std::size_t n = L.n;
    lp::Problem p;
    p.objective.assign(L.aux + 1, 0.0);
    p.objective[L.aux] = 1.0;
    for (const auto& row : L.rows) {
        Vec coeffs(L.aux + 1, 0.0);
        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) rhs -= row[i] * a[i];
        for (std::size_t k = 0; k < L.aux; ++k) coeffs[k] = row[2 * n + k];
        for (std::size_t i = 0; i < n; ++i) coeffs[L.aux] += row[n + i] * dir[i];
        p.add(std::move(coeffs), lp::Relation::LessEqual, rhs);
    }
    return p;
}

bool closed_form_dual(const ConeSpec& cone, std::span<const double> c, std::span<const double> d,
                      double tol) {
    const std::size_t n = cone.n();
    const double slack = tol * (1.0 + sum(c) + sum(d));
    switch (cone.family()) {
        case ConeFamily::Frictionless: {
            const double dmax = *std::max_element(d.begin(), d.end());
            for (std::size_t i = 0; i < n; ++i)
                if (cone.returns()[i] * dmax > c[i] + slack) return false;
            return true;
        }
        case ConeFamily::ProportionalTC: {
            const auto& R = cone.returns();
            const auto& lp = cone.lambda_plus();
            const auto& lm = cone.lambda_minus();
            double theta_lo = 0.0;
            double theta_hi = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                if (R[i] * d[i] > c[i] + slack) return false;
                theta_lo = std::max(theta_lo, d[i] / (1.0 + lp[i]));
                if (lm[i] < 1.0) theta_hi = std::min(theta_hi, c[i] / (R[i] * (1.0 - lm[i])));
            }
            return theta_lo <= theta_hi + slack;
        }
        case ConeFamily::Currency: {
            const auto& mu = cone.rates();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (mu[i][j] * d[i] > c[j] + slack) return false;
            return true;
        }
    }
    return false;
}

}  // namespace

const char* to_string(ConeFamily family) {
    switch (family) {
        case ConeFamily::Frictionless: return "frictionless";
        case ConeFamily::ProportionalTC: return "proportional_tc";
        case ConeFamily::Currency: return "currency";
    }
    return "unknown";
}

ConeSpec ConeSpec::frictionless(Vec returns) {
    if (returns.empty()) throw DimensionError("frictionless cone: no assets");
    for (double r : returns)
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("frictionless cone: returns must be positive");
    ConeSpec c;
    c.family_ = ConeFamily::Frictionless;
    c.n_ = returns.size();
    c.returns_ = std::move(returns);
    c.build_lifted();
    return c;
}

ConeSpec ConeSpec::proportional_tc(Vec returns, Vec lambda_plus, Vec lambda_minus) {
    const std::size_t n = returns.size();
    if (n == 0) throw DimensionError("proportional_tc cone: no assets");
    if (lambda_plus.size() != n || lambda_minus.size() != n)
        throw DimensionError("proportional_tc cone: returns and cost rates differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(returns[i] > 0.0) || !std::isfinite(returns[i]))
            throw DomainError("proportional_tc cone: returns must be positive");
        if (!(lambda_plus[i] >= 0.0) || !std::isfinite(lambda_plus[i]))
            throw DomainError("proportional_tc cone: buy rates must be nonnegative");
        // lambda_minus == 1 is representable so that validation can reject it
        // with a witness; it breaks the growth condition.
        if (!(lambda_minus[i] >= 0.0 && lambda_minus[i] <= 1.0))
            throw DomainError("proportional_tc cone: sell rates must lie in [0, 1]");
    }
    ConeSpec c;
    c.family_ = ConeFamily::ProportionalTC;
    c.n_ = n;
    c.returns_ = std::move(returns);
    c.lambda_plus_ = std::move(lambda_plus);
    c.lambda_minus_ = std::move(lambda_minus);
    c.build_lifted();
    return c;
}

ConeSpec ConeSpec::currency(std::vector<Vec> rates) {
    const std::size_t n = rates.size();
    if (n == 0) throw DimensionError("currency cone: no currencies");
    for (std::size_t i = 0; i < n; ++i) {
        if (rates[i].size() != n) throw DimensionError("currency cone: exchange matrix must be square");
        for (std::size_t j = 0; j < n; ++j) {
            if (!(rates[i][j] > 0.0) || !std::isfinite(rates[i][j]))
                throw DomainError("currency cone: exchange rates must be positive");
        }
        if (rates[i][i] != 1.0) throw DomainError("currency cone: diagonal exchange rates must equal 1");
    }
    ConeSpec c;
    c.family_ = ConeFamily::Currency;
    c.n_ = n;
    c.rates_ = std::move(rates);
    c.build_lifted();
    return c;
}

void ConeSpec::build_lifted() {
    const std::size_t n = n_;
    lifted_ = LiftedCone{};
    lifted_.n = n;
    switch (family_) {
        case ConeFamily::Frictionless: {
            Vec row(2 * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                row[i] = -returns_[i];
                row[n + i] = 1.0;
            }
            lifted_.rows.push_back(std::move(row));
            break;
        }
        case ConeFamily::ProportionalTC: {
            // z = (u, v): amounts bought and sold.
            lifted_.aux = 2 * n;
            const std::size_t w = lifted_.width();
            for (std::size_t i = 0; i < n; ++i) {
                Vec row(w, 0.0);  // b_i - R_i a_i - u_i + v_i <= 0
                row[i] = -returns_[i];
                row[n + i] = 1.0;
                row[2 * n + i] = -1.0;
                row[3 * n + i] = 1.0;
                lifted_.rows.push_back(std::move(row));
            }
            Vec budget(w, 0.0);  // purchases paid for by sales
            for (std::size_t i = 0; i < n; ++i) {
                budget[2 * n + i] = 1.0 + lambda_plus_[i];
                budget[3 * n + i] = -(1.0 - lambda_minus_[i]);
            }
            lifted_.rows.push_back(std::move(budget));
            for (std::size_t i = 0; i < n; ++i) {
                Vec row(w, 0.0);  // v_i <= R_i a_i keeps z bounded
                row[i] = -returns_[i];
                row[3 * n + i] = 1.0;
                lifted_.rows.push_back(std::move(row));
            }
            break;
        }
        case ConeFamily::Currency: {
            // z = d, d[i][j] at index i*n + j: amount of currency j turned into i.
            lifted_.aux = n * n;
            const std::size_t w = lifted_.width();
            for (std::size_t i = 0; i < n; ++i) {
                Vec row(w, 0.0);  // sum_j d[j][i] <= a_i
                row[i] = -1.0;
                for (std::size_t j = 0; j < n; ++j) row[2 * n + j * n + i] = 1.0;
                lifted_.rows.push_back(std::move(row));
            }
            for (std::size_t i = 0; i < n; ++i) {
                Vec row(w, 0.0);  // b_i <= sum_j mu[i][j] d[i][j]
                row[n + i] = 1.0;
                for (std::size_t j = 0; j < n; ++j) row[2 * n + i * n + j] = -rates_[i][j];
                lifted_.rows.push_back(std::move(row));
            }
            break;
        }
    }
}

Vec ConeSpec::hold(std::span<const double> a) const {
    require_size(a, n_, "hold");
    Vec b(a.begin(), a.end());
    if (family_ != ConeFamily::Currency)
        for (std::size_t i = 0; i < n_; ++i) b[i] *= returns_[i];
    return b;
}

Vec ConeSpec::liquidation_weights() const {
    Vec w(n_, 1.0);
    if (family_ == ConeFamily::ProportionalTC)
        for (std::size_t i = 0; i < n_; ++i) w[i] = 1.0 - lambda_minus_[i];
    return w;
}

bool ConeSpec::operator==(const ConeSpec& o) const {
    return family_ == o.family_ && n_ == o.n_ && returns_ == o.returns_ &&
           lambda_plus_ == o.lambda_plus_ && lambda_minus_ == o.lambda_minus_ && rates_ == o.rates_;
}

bool contains(const ConeSpec& cone, std::span<const double> a, std::span<const double> b, double tol) {
    check_pair(cone, a, b, "contains");
    const double slack = tol * (1.0 + sum(a) + sum(b));
    switch (cone.family()) {
        case ConeFamily::Frictionless:
            return sum(b) - dot(cone.returns(), a) <= slack;
        case ConeFamily::ProportionalTC:
            return tc_excess(cone, a, b) <= slack;
        case ConeFamily::Currency: {
            const std::size_t n = cone.n();
            const auto& mu = cone.rates();
            lp::Problem p;
            p.objective.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                Vec row(n * n, 0.0);
                for (std::size_t j = 0; j < n; ++j) row[j * n + i] = 1.0;
                p.add(std::move(row), lp::Relation::LessEqual, a[i] + slack);
            }
            for (std::size_t i = 0; i < n; ++i) {
                Vec row(n * n, 0.0);
                for (std::size_t j = 0; j < n; ++j) row[i * n + j] = mu[i][j];
                p.add(std::move(row), lp::Relation::GreaterEqual, b[i] - slack);
            }
            return lp::try_solve(p).optimal();
        }
    }
    return false;
}

bool lifted_contains(const ConeSpec& cone, std::span<const double> a, std::span<const double> b,
                     double tol) {
    check_pair(cone, a, b, "lifted_contains");
    const LiftedCone& L = cone.lifted();
    const std::size_t n = L.n;
    const double slack = tol * (1.0 + sum(a) + sum(b));
    if (L.aux == 0) {
        for (const auto& row : L.rows) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += row[i] * a[i] + row[n + i] * b[i];
            if (s > slack) return false;
        }
        return true;
    }
    lp::Problem p;
    p.objective.assign(L.aux, 0.0);
    for (const auto& row : L.rows) {
        Vec coeffs(row.begin() + 2 * n, row.end());
        double rhs = slack;
        for (std::size_t i = 0; i < n; ++i) rhs -= row[i] * a[i] + row[n + i] * b[i];
        p.add(std::move(coeffs), lp::Relation::LessEqual, rhs);
    }
    return lp::try_solve(p).optimal();
}

double max_growth(const ConeSpec& cone, std::span<const double> a, std::span<const double> direction) {
    check_pair(cone, a, direction, "max_growth");
    if (!(sum(direction) > 0.0)) throw DomainError("max_growth: direction must be nonzero");
    switch (cone.family()) {
        case ConeFamily::Frictionless:
            return dot(cone.returns(), a) / sum(direction);
        case ConeFamily::ProportionalTC:
            return tc_max_growth(cone, a, direction);
        case ConeFamily::Currency:
            return lifted_max_growth(cone, a, direction);
    }
    return 0.0;
}

double lifted_max_growth(const ConeSpec& cone, std::span<const double> a,
                         std::span<const double> direction) {
    check_pair(cone, a, direction, "lifted_max_growth");
    if (!(sum(direction) > 0.0)) throw DomainError("lifted_max_growth: direction must be nonzero");
    const auto sol = lp::solve(growth_problem(cone.lifted(), a, direction));
    return std::max(0.0, sol.x.back());
}

double max_alpha(const ConeSpec& cone, std::span<const double> x) {
    require_size(x, cone.n(), "max_alpha");
    require_nonnegative(x, "max_alpha");
    if (std::abs(sum(x) - 1.0) > 1e-9) throw DomainError("max_alpha: portfolio must lie on the unit simplex");
    return max_growth(cone, x, x);
}

double dual_residual(const ConeSpec& cone, std::span<const double> c, std::span<const double> d) {
    check_pair(cone, c, d, "dual_residual");
    const LiftedCone& L = cone.lifted();
    const std::size_t n = L.n;
    lp::Problem p;
    p.objective.assign(L.width(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        p.objective[i] = -c[i];
        p.objective[n + i] = d[i];
    }
    for (const auto& row : L.rows) p.add(row, lp::Relation::LessEqual, 0.0);
    Vec norm(L.width(), 0.0);
    std::fill(norm.begin(), norm.begin() + 2 * n, 1.0);
    p.add(std::move(norm), lp::Relation::Equal, 1.0);
    const auto sol = lp::solve(p);
    return std::max(0.0, sol.value);
}

double normalized_dual_residual(const ConeSpec& cone, std::span<const double> c, std::span<const double> d) {
    const double scale = sum(c) + sum(d);
    if (!(scale > 0.0)) return 0.0;
    return dual_residual(cone, c, d) / scale;
}

bool dual_contains(const ConeSpec& cone, std::span<const double> c, std::span<const double> d,
                   double tol, DualMethod method) {
    check_pair(cone, c, d, "dual_contains");
    if (method == DualMethod::ClosedForm) return closed_form_dual(cone, c, d, tol);
    return dual_residual(cone, c, d) <= tol;
}

double liquidation_value(const ConeSpec& cone, std::span<const double> b) {
    require_size(b, cone.n(), "liquidation_value");
    require_nonnegative(b, "liquidation_value");
    return dot(cone.liquidation_weights(), b);
}

}  // namespace vng

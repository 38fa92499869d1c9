#pragma once

// Solvency cones G in R+^n x R+^n. A pair (a, b) is in G when the portfolio a
// held before the move can be rebalanced into b without external funds.
//
// Three families are supported:
//   Frictionless    sum(b) <= sum(R_i a_i)
//   ProportionalTC  sum_i max((1+l+_i)(b_i - R_i a_i), (1-l-_i)(b_i - R_i a_i)) <= 0
//   Currency        exists d >= 0: sum_j d[j][i] <= a_i,  b_i <= sum_j mu[i][j] d[i][j]
//
// Positions are market values for the first two families and physical units
// of currency for the third.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vng/types.hpp"

namespace vng {

enum class ConeFamily { Frictionless, ProportionalTC, Currency };

const char* to_string(ConeFamily family);

/// Polyhedral description of a cone with auxiliary variables:
///   G = { (a, b) >= 0 : exists z >= 0, row . (a, b, z) <= 0 for every row }.
struct LiftedCone {
    std::size_t n = 0;
    std::size_t aux = 0;
    std::vector<Vec> rows;  // each of length 2n + aux

    std::size_t width() const { return 2 * n + aux; }
};

class ConeSpec {
public:
    static ConeSpec frictionless(Vec returns);
    static ConeSpec proportional_tc(Vec returns, Vec lambda_plus, Vec lambda_minus);
    /// rates[i][j]: units of currency i obtained for one unit of currency j.
    static ConeSpec currency(std::vector<Vec> rates);

    ConeFamily family() const { return family_; }
    std::size_t n() const { return n_; }

    const Vec& returns() const { return returns_; }
    const Vec& lambda_plus() const { return lambda_plus_; }
    const Vec& lambda_minus() const { return lambda_minus_; }
    const std::vector<Vec>& rates() const { return rates_; }

    /// Successor of a when nothing is traded.
    Vec hold(std::span<const double> a) const;

    /// Weights w with liquidation value w.b (1 - l-_i for ProportionalTC, 1 otherwise).
    Vec liquidation_weights() const;

    const LiftedCone& lifted() const { return lifted_; }

    bool operator==(const ConeSpec& other) const;

private:
    ConeSpec() = default;
    void build_lifted();

    ConeFamily family_ = ConeFamily::Frictionless;
    std::size_t n_ = 0;
    Vec returns_;
    Vec lambda_plus_;
    Vec lambda_minus_;
    std::vector<Vec> rates_;
    LiftedCone lifted_;
};

/// Relative tolerance used for boundary membership: tol * (1 + |a| + |b|).
inline constexpr double kMembershipTolerance = 1e-9;

/// (a, b) in G up to tol * (1 + |a| + |b|).
bool contains(const ConeSpec& cone, std::span<const double> a, std::span<const double> b,
              double tol = kMembershipTolerance);

/// Membership decided through the lifted polyhedral description and the LP
/// core, independently of the family-specific formulas used by contains().
bool lifted_contains(const ConeSpec& cone, std::span<const double> a, std::span<const double> b,
                     double tol = kMembershipTolerance);

/// sup{ alpha >= 0 : (a, alpha * direction) in G }. The direction must be
/// nonnegative and nonzero.
double max_growth(const ConeSpec& cone, std::span<const double> a, std::span<const double> direction);

/// max_growth computed by the LP core on the lifted description.
double lifted_max_growth(const ConeSpec& cone, std::span<const double> a,
                         std::span<const double> direction);

/// One-step growth factor of a fixed-proportion portfolio: max_growth(x, x)
/// for x on the unit simplex.
double max_alpha(const ConeSpec& cone, std::span<const double> x);

/// max(0, sup{ d.b - c.a : (a, b) in G, |a| + |b| = 1 }), computed by the LP core.
/// Zero exactly when (c, d) lies in the dual cone.
double dual_residual(const ConeSpec& cone, std::span<const double> c, std::span<const double> d);

/// dual_residual divided by |c| + |d|, so that it does not change when the
/// pair is rescaled. Zero for c = d = 0.
double normalized_dual_residual(const ConeSpec& cone, std::span<const double> c, std::span<const double> d);

enum class DualMethod { Lp, ClosedForm };

/// (c, d) in the dual cone { (c, d) >= 0 : d.b <= c.a for all (a, b) in G }.
bool dual_contains(const ConeSpec& cone, std::span<const double> c, std::span<const double> d,
                   double tol = kMembershipTolerance, DualMethod method = DualMethod::Lp);

/// Net value after selling every position: sum (1 - l-_i) b_i, or |b| when
/// the family carries no selling cost.
double liquidation_value(const ConeSpec& cone, std::span<const double> b);

}  // namespace vng

#include "vng/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vng::lp {
namespace {

// Tableau layout: rows 0..m-1 hold the constraints, each row ends with its
// right-hand side. Columns are [original | slack/surplus | artificial].
class Tableau {
public:
    Tableau(const Problem& p, const Options& opt) : opt_(opt) {
        m_ = p.constraints.size();
        n_ = p.columns();
        for (const auto& c : p.constraints) {
            if (c.coeffs.size() != n_)
                throw DimensionError("lp: constraint has " + std::to_string(c.coeffs.size()) +
                                     " coefficients, objective has " + std::to_string(n_));
        }

        // Normalize so every rhs is nonnegative.
        flip_.assign(m_, false);
        std::vector<Relation> rel(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            rel[i] = p.constraints[i].rel;
            if (p.constraints[i].rhs < 0.0) {
                flip_[i] = true;
                if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
                else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
            }
        }

        std::size_t n_slack = 0, n_art = 0;
        for (auto r : rel) {
            if (r != Relation::Equal) ++n_slack;
            if (r != Relation::LessEqual) ++n_art;
        }
        slack_begin_ = n_;
        art_begin_ = n_ + n_slack;
        cols_ = art_begin_ + n_art;
        rhs_ = cols_;

        t_.assign(m_, Vec(cols_ + 1, 0.0));
        basis_.assign(m_, 0);
        unit_col_.assign(m_, 0);

        std::size_t s = slack_begin_, a = art_begin_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = flip_[i] ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign * p.constraints[i].coeffs[j];
            t_[i][rhs_] = sign * p.constraints[i].rhs;
            switch (rel[i]) {
                case Relation::LessEqual:
                    t_[i][s] = 1.0;
                    basis_[i] = unit_col_[i] = s++;
                    break;
                case Relation::GreaterEqual:
                    t_[i][s++] = -1.0;
                    t_[i][a] = 1.0;
                    basis_[i] = unit_col_[i] = a++;
                    break;
                case Relation::Equal:
                    t_[i][a] = 1.0;
                    basis_[i] = unit_col_[i] = a++;
                    break;
            }
        }
    }

    Solution run(const Problem& p) {
        Solution sol;
        sol.x.assign(n_, 0.0);
        sol.duals.assign(m_, 0.0);

        if (art_begin_ < cols_) {
            Vec c1(cols_, 0.0);
            for (std::size_t j = art_begin_; j < cols_; ++j) c1[j] = -1.0;
            const Status st = iterate(c1, cols_);
            if (st == Status::IterationLimit) {
                sol.status = st;
                sol.iterations = iterations_;
                return sol;
            }
            double infeas = 0.0;
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] >= art_begin_) infeas += t_[i][rhs_];
            double scale = 1.0;
            for (const auto& c : p.constraints) scale = std::max(scale, std::abs(c.rhs));
            if (infeas > opt_.tolerance * scale) {
                sol.status = Status::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
            drive_out_artificials();
        }

        Vec c2(cols_, 0.0);
        std::copy(p.objective.begin(), p.objective.end(), c2.begin());
        const Status st = iterate(c2, art_begin_);
        sol.status = st;
        sol.iterations = iterations_;
        if (st != Status::Optimal) return sol;

        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.x[basis_[i]] = std::max(0.0, t_[i][rhs_]);
        sol.value = dot(p.objective, sol.x);

        // y = c_B' B^{-1}; column unit_col_[i] of the tableau is column i of B^{-1}.
        for (std::size_t i = 0; i < m_; ++i) {
            double y = 0.0;
            for (std::size_t k = 0; k < m_; ++k) y += c2[basis_[k]] * t_[k][unit_col_[i]];
            sol.duals[i] = flip_[i] ? -y : y;
        }
        return sol;
    }

private:
    // Maximizes c.x with columns [0, allowed) eligible to enter.
    Status iterate(const Vec& c, std::size_t allowed) {
        for (;;) {
            if (iterations_ >= opt_.max_iterations) return Status::IterationLimit;
            // Bland: lowest-index column with positive reduced cost.
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (is_basic(j)) continue;
                double rc = c[j];
                for (std::size_t i = 0; i < m_; ++i) rc -= c[basis_[i]] * t_[i][j];
                if (rc > opt_.tolerance * 1e-3) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return Status::Optimal;

            // Harris ratio test: find the largest step that keeps every row
            // within the feasibility tolerance, then among the rows blocking
            // before that step pick the largest pivot element. Small pivots
            // on degenerate vertices are what corrupts a dense tableau.
            double theta = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = t_[i][enter];
                if (a > opt_.pivot_tolerance)
                    theta = std::min(theta, (std::max(0.0, t_[i][rhs_]) + opt_.tolerance) / a);
            }
            std::size_t leave = m_;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = t_[i][enter];
                if (a <= opt_.pivot_tolerance || std::max(0.0, t_[i][rhs_]) / a > theta) continue;
                if (leave == m_ || a > t_[leave][enter] ||
                    (a == t_[leave][enter] && basis_[i] < basis_[leave]))
                    leave = i;
            }
            if (leave == m_) return Status::Unbounded;
            pivot(leave, enter);
            for (std::size_t i = 0; i < m_; ++i)
                if (t_[i][rhs_] < 0.0) t_[i][rhs_] = 0.0;
            ++iterations_;
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < art_begin_) continue;
            // The artificial sits at a level below the phase-1 tolerance;
            // treat it as zero so the pivot leaves every other row unchanged.
            t_[i][rhs_] = 0.0;
            std::size_t best = art_begin_;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (!is_basic(j) && std::abs(t_[i][j]) > 1e-9 &&
                    (best == art_begin_ || std::abs(t_[i][j]) > std::abs(t_[i][best])))
                    best = j;
            if (best < art_begin_) pivot(i, best);
            // A row with no eligible column is redundant; its artificial stays
            // basic at zero and no later pivot can change that row.
        }
    }

    bool is_basic(std::size_t j) const {
        return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
    }

    void pivot(std::size_t r, std::size_t c) {
        const double inv = 1.0 / t_[r][c];
        for (double& v : t_[r]) v *= inv;
        t_[r][c] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = t_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
            t_[i][c] = 0.0;
        }
        basis_[r] = c;
    }

    Options opt_;
    std::size_t m_ = 0, n_ = 0, cols_ = 0, rhs_ = 0;
    std::size_t slack_begin_ = 0, art_begin_ = 0;
    std::vector<Vec> t_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> unit_col_;
    std::vector<bool> flip_;
    std::size_t iterations_ = 0;
};

}  // namespace

Solution try_solve(const Problem& problem, const Options& options) {
    Tableau tab(problem, options);
    return tab.run(problem);
}

Solution solve(const Problem& problem, const Options& options) {
    Solution s = try_solve(problem, options);
    switch (s.status) {
        case Status::Optimal:
            return s;
        case Status::Infeasible:
            throw InfeasibleError("lp: infeasible");
        case Status::Unbounded:
            throw UnboundedError("lp: unbounded");
        case Status::IterationLimit:
            throw IterationLimitError("lp: iteration limit exceeded after " +
                                      std::to_string(s.iterations) + " pivots");
    }
    return s;
}

const char* to_string(Status status) {
    switch (status) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

}  // namespace vng::lp

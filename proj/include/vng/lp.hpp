#pragma once

// Dense two-phase simplex method with Bland's pivoting rule.
//
// Solves   maximize  c.x   subject to  A_i.x (<=, =, >=) b_i,  x >= 0.
//
// The problems met in this library are small (tens of columns), so a dense
// tableau is used throughout. Bland's rule makes every run deterministic and
// free of cycling.

#include <cstddef>
#include <vector>

#include "vng/error.hpp"
#include "vng/types.hpp"

namespace vng::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
    Vec coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

struct Problem {
    Vec objective;                       // maximized
    std::vector<Constraint> constraints;

    std::size_t columns() const { return objective.size(); }
    void add(Vec coeffs, Relation rel, double rhs) {
        constraints.push_back({std::move(coeffs), rel, rhs});
    }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::Infeasible;
    double value = 0.0;
    Vec x;
    /// One multiplier per constraint, sign convention of the maximization
    /// dual: y >= 0 on <= rows, y <= 0 on >= rows, free on = rows, A'y >= c.
    Vec duals;
    std::size_t iterations = 0;

    bool optimal() const { return status == Status::Optimal; }
};

struct Options {
    double tolerance = 1e-9;     // feasibility / optimality tolerance
    double pivot_tolerance = 1e-9;
    std::size_t max_iterations = 100000;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};
class UnboundedError : public Error {
public:
    using Error::Error;
};
class IterationLimitError : public Error {
public:
    using Error::Error;
};

/// Runs the simplex method and reports the outcome through Solution::status.
Solution try_solve(const Problem& problem, const Options& options = {});

/// As try_solve, but throws on any non-optimal outcome.
Solution solve(const Problem& problem, const Options& options = {});

const char* to_string(Status status);

}  // namespace vng::lp

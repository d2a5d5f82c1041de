#pragma once

#include <vector>

#include "convo/rational.hpp"

namespace convo {

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::LessEq;
    Rational rhs;
};

// maximize objective . x  subject to the rows; nonneg[j] == false means x_j is free
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rational> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<bool> nonneg;

    int add_var(const Rational& obj_coeff, bool nonnegative = true);
    void add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs);
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Rational value;
    std::vector<Rational> point;
};

// Exact two-phase simplex with Bland's rule; deterministic for identical input.
LPSolution lp_solve(const LinearProgram& lp);

}  // namespace convo

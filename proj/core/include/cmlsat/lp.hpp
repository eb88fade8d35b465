#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

namespace cmlsat {

// Exact rational linear programming (two-phase simplex, Bland's rule) over
// nonnegative variables, and a small branch-and-bound for bounded integer programs.

enum class Sense { LE, GE, EQ };

struct LinearConstraint {
    std::vector<mpq_class> coeffs;
    Sense sense = Sense::GE;
    mpq_class rhs;
};

struct LinearProgram {
    std::size_t vars = 0;
    std::vector<LinearConstraint> constraints;
    std::vector<mpq_class> objective;  // empty means pure feasibility
    bool maximize = false;

    void add(std::vector<mpq_class> coeffs, Sense sense, mpq_class rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<mpq_class> x;
    mpq_class value;
};

LpResult solveLp(const LinearProgram& lp);

struct IlpResult {
    bool feasible = false;
    bool exhausted = false;  // node limit reached before a decision
    std::vector<mpz_class> x;
};

// All variables integral within [0, upper[i]]; minimizes (or maximizes) the objective.
IlpResult solveIlp(const LinearProgram& lp, const std::vector<long>& upper, std::size_t nodeLimit = 20000);

} // namespace cmlsat

#include <doctest.h>

#include "cmlsat/lp.hpp"

using namespace cmlsat;

TEST_CASE("feasibility and optimum")
{
    LinearProgram lp;
    lp.vars = 2;
    lp.add({1, 1}, Sense::LE, 4);
    lp.add({1, 3}, Sense::LE, 6);
    lp.objective = {3, 2};
    lp.maximize = true;
    LpResult r = solveLp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == 12);
    CHECK(r.x[0] == 4);
    CHECK(r.x[1] == 0);
}

TEST_CASE("exact rational vertex")
{
    LinearProgram lp;
    lp.vars = 2;
    lp.add({3, 5}, Sense::EQ, 1);
    lp.add({1, -1}, Sense::EQ, 0);
    LpResult r = solveLp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == mpq_class(1, 8));
    CHECK(r.x[1] == mpq_class(1, 8));
}

TEST_CASE("infeasible and unbounded")
{
    LinearProgram lp;
    lp.vars = 1;
    lp.add({1}, Sense::GE, 2);
    lp.add({1}, Sense::LE, 1);
    CHECK(solveLp(lp).status == LpStatus::Infeasible);

    LinearProgram un;
    un.vars = 1;
    un.add({1}, Sense::GE, 1);
    un.objective = {1};
    un.maximize = true;
    CHECK(solveLp(un).status == LpStatus::Unbounded);
}

TEST_CASE("integer program needs branching")
{
    // 2x = 1 has a rational solution only
    LinearProgram lp;
    lp.vars = 1;
    lp.add({2}, Sense::EQ, 1);
    CHECK(solveLp(lp).status == LpStatus::Optimal);
    IlpResult r = solveIlp(lp, {5});
    CHECK_FALSE(r.feasible);
    CHECK_FALSE(r.exhausted);

    LinearProgram two;
    two.vars = 2;
    two.add({2, 2}, Sense::GE, 3);
    two.add({1, -1}, Sense::EQ, 0);
    two.objective = {1, 1};
    IlpResult s = solveIlp(two, {5, 5});
    REQUIRE(s.feasible);
    CHECK(s.x[0] == 1);
    CHECK(s.x[1] == 1);
}

TEST_CASE("upper bounds are respected")
{
    LinearProgram lp;
    lp.vars = 1;
    lp.add({1}, Sense::GE, 7);
    CHECK_FALSE(solveIlp(lp, {6}).feasible);
    CHECK(solveIlp(lp, {7}).feasible);
}

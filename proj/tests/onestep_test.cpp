#include <doctest.h>

#include <algorithm>

#include "cmlsat/formula.hpp"
#include "cmlsat/onestep.hpp"
#include "cmlsat/parser.hpp"

using namespace cmlsat;

namespace {

Formula Box(Formula f) { return modal(ModalOperator::box(), f); }
Formula G(unsigned long k, Formula f) { return modal(ModalOperator::graded(k), f); }

VarClause sorted(VarClause c)
{
    std::sort(c.begin(), c.end(), [](const VarLiteral& x, const VarLiteral& y) {
        return std::pair(x.var, x.positive) < std::pair(y.var, y.positive);
    });
    return c;
}

std::vector<VarClause> cnfOf(std::vector<long> coeffs, long bound)
{
    LinearPremise p;
    for (long c : coeffs)
        p.coeffs.push_back(c);
    p.bound = bound;
    std::vector<VarClause> out;
    for (const auto& c : premiseCnfClauses(Premise{p}))
        out.push_back(sorted(c));
    return out;
}

} // namespace

TEST_CASE("linear premise CNF examples")
{
    CHECK(cnfOf({1, 1}, 1) == std::vector<VarClause>{{{0, true}, {1, true}}});
    CHECK(cnfOf({1, -1}, 0) == std::vector<VarClause>{{{0, true}, {1, false}}});
    CHECK(cnfOf({-1}, 0) == std::vector<VarClause>{{{0, false}}});
}

TEST_CASE("linear clause membership without enumeration")
{
    LinearPremise p;
    p.coeffs = {1, -1};
    p.bound = 0;
    CHECK(premiseHasClause(Premise{p}, {{1, false}, {0, true}}));
    CHECK_FALSE(premiseHasClause(Premise{p}, {{0, true}, {1, true}}));
    for (std::uint64_t J = 0; J < 8; ++J)
        CHECK(linearClauseIndex(linearClause(J, 3), 3) == J);
}

TEST_CASE("property: linear premise CNF is the arithmetic inequality")
{
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<long> c(n, -3);
        for (;;) {
            if (std::find(c.begin(), c.end(), 0) == c.end())
                for (long k = -4; k <= 4; ++k) {
                    LinearPremise lp;
                    for (long x : c)
                        lp.coeffs.push_back(x);
                    lp.bound = k;
                    Premise p = lp;
                    auto cnf = premiseCnfClauses(p);
                    for (std::uint64_t v = 0; v < (std::uint64_t(1) << n); ++v) {
                        long s = 0;
                        for (std::size_t i = 0; i < n; ++i)
                            s += ((v >> i) & 1) ? c[i] : 0;
                        bool byClauses = std::all_of(cnf.begin(), cnf.end(), [&](const VarClause& g) {
                            return std::any_of(g.begin(), g.end(),
                                               [&](const VarLiteral& l) { return (((v >> l.var) & 1) != 0) == l.positive; });
                        });
                        CHECK(byClauses == (s >= k));
                        CHECK(premiseHolds(p, v) == (s >= k));
                    }
                }
            std::size_t i = 0;
            while (i < n && c[i] == 3)
                c[i++] = -3;
            if (i == n)
                break;
            ++c[i];
        }
    }
}

TEST_CASE("congruence matchings")
{
    Formula phi = atom("p"), psi = parseFormula("q & r"), chi = atom("s");
    auto ms = congruenceMatchings({{Box(phi), false}, {Box(psi), true}}, Logic::E);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].code.scheme == Scheme::Congruence);
    CHECK(ms[0].conclusion() == Clause{{Box(phi), false}, {Box(psi), true}});
    CHECK(congruenceMatchings({{Box(phi), false}, {Box(psi), true}, {Box(chi), true}}, Logic::E).empty());
    CHECK(congruenceMatchings({{G(2, phi), false}, {G(2, psi), true}}, Logic::GML).size() == 1);
    CHECK(congruenceMatchings({{G(2, phi), false}, {G(1, psi), true}}, Logic::GML).empty());
    // the premise is a <-> b
    Premise pr = premiseOf(ms[0].code);
    for (std::uint64_t v = 0; v < 4; ++v)
        CHECK(premiseHolds(pr, v) == ((v & 1) == ((v >> 1) & 1)));
}

TEST_CASE("negated clause instances")
{
    Formula p = atom("p"), q = atom("q");
    CHECK(negatedClauseInstance({{0, false}}, {bottom()}) == bottom());
    CHECK(negatedClauseInstance({{0, false}, {1, true}}, {p, p}) == conj(p, neg(p)));
    CHECK(negatedClauseInstance({{0, true}, {1, true}}, {p, q}) == conj(neg(p), neg(q)));
    CHECK(instantiatedClause({{0, true}, {1, true}}, {p, q}) == disj(p, q));
}

TEST_CASE("contracted instances")
{
    Formula p = atom("p"), q = atom("q");
    RuleCode k;
    k.logic = Logic::K;
    k.scheme = Scheme::KRule;
    k.signs = {false, true};
    k.operators = {ModalOperator::box(), ModalOperator::box()};
    CHECK(isContractedInstance(RuleMatching{k, {p, q}}));
    RuleCode k3 = k;
    k3.signs = {false, false, true};
    k3.operators.push_back(ModalOperator::box());
    CHECK_FALSE(isContractedInstance(RuleMatching{k3, {p, p, q}}));
    auto cong = congruenceMatchings({{Box(p), false}, {Box(p), true}}, Logic::E);
    REQUIRE(cong.size() == 1);
    CHECK(isContractedInstance(cong[0]));
}

TEST_CASE("rule code names round trip")
{
    for (Scheme s : {Scheme::Congruence, Scheme::Monotone, Scheme::KRule, Scheme::KDRule, Scheme::Coal1, Scheme::Coal4,
                     Scheme::Graded, Scheme::Majority, Scheme::Prob})
        CHECK(schemeFromName(schemeName(s)) == s);
    CHECK_THROWS_AS(schemeFromName("nope"), std::invalid_argument);
}

#include <doctest.h>

#include "cmlsat/formula.hpp"
#include "cmlsat/logics.hpp"
#include "cmlsat/parser.hpp"
#include "cmlsat/solver.hpp"
#include "support/generators.hpp"

using namespace cmlsat;

namespace {

bool sat(const char* logic, const char* text)
{
    LogicConfig cfg = LogicConfig::fromName(logic);
    return satisfiable(parse(text, cfg), cfg).satisfiable;
}

Formula Box(Formula f) { return modal(ModalOperator::box(), f); }

} // namespace

TEST_CASE("verdict examples")
{
    for (const LogicConfig& cfg : testing::allLogics())
        CHECK(satisfiable(top(), cfg).satisfiable);
    CHECK(sat("K", "[]false"));
    CHECK_FALSE(sat("KD", "[]false"));
    CHECK_FALSE(sat("K", "~([](a -> b) -> ([]a -> []b))"));
    CHECK(sat("PML", "L{1/2} p | L{1/2} ~p"));
    CHECK_FALSE(sat("PML", "L{3/5} p & L{3/5} ~p"));
    CHECK(sat("PML", "L{1/2} p & L{1/2} ~p"));
    CHECK_FALSE(sat("GML", "<1>p & ~<0>p"));
    CHECK(sat("GML", "<0>p & ~<1>p"));
    CHECK(sat("K", "[](p | q) & ~([]p | []q)"));
    CHECK_FALSE(sat("E", "[]p & ~[](p & p)"));
    CHECK(sat("E", "[](p & q) & ~[]p"));
    CHECK_FALSE(sat("M", "[](p & q) & ~[]p"));
    CHECK(sat("MAJ", "W p & W ~p"));
    CHECK_FALSE(sat("MAJ", "~W p & ~W ~p"));
    CHECK_FALSE(sat("COAL:2", "[C 1]p & [C 2]~p"));
    CHECK(sat("COAL:2", "[C 1]p & [C 1]~p"));
    CHECK_FALSE(sat("K", "p & ~p"));
}

TEST_CASE("contracted clauses")
{
    Formula bb = Box(bottom());
    auto one = enumerateContractedClauses(Pseudovaluation{{{bb, true}}});
    REQUIRE(one.size() == 1);
    CHECK(one[0] == Clause{{bb, false}});
    CHECK(enumerateContractedClauses(Pseudovaluation{}).empty());
    Formula A = Box(atom("a")), B = Box(atom("b"));
    auto three = enumerateContractedClauses(Pseudovaluation{{{A, true}, {B, false}}});
    REQUIRE(three.size() == 3);
    CHECK(three[0] == Clause{{A, false}});
    CHECK(three[1] == Clause{{B, true}});
    CHECK(three[2] == Clause{{A, false}, {B, true}});
}

TEST_CASE("demands")
{
    LogicConfig kd = LogicConfig::fromName("KD");
    Solver s(kd);
    Clause rho{{Box(bottom()), false}};
    auto ms = matchings(rho, kd);
    REQUIRE(ms.size() == 1);
    CHECK_FALSE(s.demandSatisfiable(rho, ms[0]));

    LogicConfig e = LogicConfig::fromName("E");
    Solver se(e);
    Formula p = atom("p");
    Clause cong{{Box(p), false}, {Box(conj(p, p)), true}};
    auto cm = matchings(cong, e);
    REQUIRE(cm.size() == 1);
    CHECK_FALSE(se.demandSatisfiable(cong, cm[0]));

    LogicConfig k = LogicConfig::fromName("K");
    Solver sk(k);
    Clause kr{{Box(p), false}, {Box(atom("q")), true}};
    auto km = matchings(kr, k);
    REQUIRE(km.size() == 2);
    CHECK(km[0].code.scheme == Scheme::Congruence);
    CHECK(km[1].code.scheme == Scheme::KRule);
    CHECK(sk.demandSatisfiable(kr, km[1]));
}

TEST_CASE("pattern helpers")
{
    Formula p = atom("p"), q = atom("q");
    CHECK(patternFormula({p, q}, 0b01) == conj(p, neg(q)));
    CHECK(patternFalsifies({{0, true}}, {0b10}));
    CHECK_FALSE(patternFalsifies({{0, true}}, {0b01}));
    Formula g = modal(ModalOperator::graded(1), p), h = modal(ModalOperator::graded(0), p);
    CHECK(patternArguments({{g, true}, {h, false}}) == std::vector<Formula>{p});
}

TEST_CASE("property: memoization is transparent and recursion stays within depth")
{
    testing::Rng rng(31);
    for (LogicConfig cfg : testing::allLogics())
        for (int k = 0; k < 60; ++k) {
            Formula f = k % 2 ? testing::denseFormula(cfg, rng) : testing::randomFormula(cfg, rng);
            Verdict memo = satisfiable(f, cfg);
            LogicConfig plain = cfg;
            plain.memoize = false;
            Verdict fresh = satisfiable(f, plain);
            INFO(cfg.name() << " " << toString(f));
            CHECK(memo.satisfiable == fresh.satisfiable);
            CHECK(memo.stats.maxLevel <= depth(f));
            CHECK(traceDepth(memo.trace) <= depth(f));
        }
}

TEST_CASE("property: verdicts are deterministic")
{
    testing::Rng rng(32);
    for (const LogicConfig& cfg : testing::allLogics())
        for (int k = 0; k < 30; ++k) {
            Formula f = testing::denseFormula(cfg, rng);
            Verdict a = satisfiable(f, cfg), b = satisfiable(f, cfg);
            CHECK(a.satisfiable == b.satisfiable);
            CHECK(a.stats.nodes == b.stats.nodes);
            CHECK(a.stats.matchingsExplored == b.stats.matchingsExplored);
        }
}

TEST_CASE("satisfiable nodes choose a pseudovaluation whose demands are satisfiable")
{
    testing::Rng rng(33);
    for (const LogicConfig& cfg : testing::allLogics())
        for (int k = 0; k < 40; ++k) {
            Formula f = testing::denseFormula(cfg, rng);
            Verdict v = satisfiable(f, cfg);
            if (!v.satisfiable)
                continue;
            for (const auto& d : v.trace->demands)
                CHECK(d.child->satisfiable);
            for (const auto& pc : v.trace->patterns)
                CHECK(pc.child->satisfiable);
        }
}

#include <doctest.h>

#include "cmlsat/formula.hpp"
#include "cmlsat/parser.hpp"
#include "cmlsat/propositional.hpp"
#include "support/generators.hpp"

using namespace cmlsat;

namespace {
const LogicConfig K = LogicConfig::fromName("K");
const LogicConfig GML = LogicConfig::fromName("GML");
const LogicConfig PML = LogicConfig::fromName("PML");
}

TEST_CASE("parse builds the expected nodes")
{
    CHECK(parse("[] false", K) == modal(ModalOperator::box(), bottom()));
    Formula p = atom("p");
    CHECK(parse("<2> (p & ~p)", GML) == modal(ModalOperator::graded(2), conj(p, neg(p))));
    Formula lowest = parse("L{6/10} p", PML);
    CHECK(lowest == parse("L{3/5} p", PML));
    CHECK(lowest->op.prob == mpq_class(3, 5));
}

TEST_CASE("parse rejects bad input")
{
    CHECK_THROWS_AS(parse("p &", K), ParseError);
    CHECK_THROWS_AS(parse("L{3/2} p", PML), ParseError);
    CHECK_THROWS_AS(parse("L{1/0} p", PML), ParseError);
    CHECK_THROWS_AS(parse("<1> p", K), ConfigError);
    CHECK_THROWS_AS(parse("[C 3] p", LogicConfig::fromName("COAL:2")), ConfigError);
}

TEST_CASE("precedence and associativity")
{
    Formula a = atom("a"), b = atom("b"), c = atom("c");
    CHECK(parseFormula("a & b | c") == disj(conj(a, b), c));
    CHECK(parseFormula("a -> b -> c") == implies(a, implies(b, c)));
    CHECK(parseFormula("a -> b <-> c") == iff(implies(a, b), c));
    CHECK(parseFormula("~[]a & b") == conj(neg(modal(ModalOperator::box(), a)), b));
    CHECK(parseFormula("M a") == neg(modal(ModalOperator::majority(), neg(a))));
    CHECK(parseFormula("[C 1,3] a")->op.coalition == 0b101u);
}

TEST_CASE("hash consing gives pointer equality")
{
    Formula x = conj(atom("p"), modal(ModalOperator::graded(1), atom("q")));
    Formula y = conj(atom("p"), modal(ModalOperator::graded(1), atom("q")));
    CHECK(x == y);
    CHECK(conj(atom("p"), atom("q")) != conj(atom("q"), atom("p")));
}

TEST_CASE("depth")
{
    CHECK(depth(bottom()) == 0);
    CHECK(depth(modal(ModalOperator::box(), bottom())) == 1);
    CHECK(depth(modal(ModalOperator::graded(3), conj(modal(ModalOperator::box(), neg(bottom())), bottom()))) == 2);
    CHECK(depth(atom("p")) == 0);
}

TEST_CASE("size")
{
    CHECK(size(modal(ModalOperator::box(), bottom())) == 2);
    CHECK(size(modal(ModalOperator::graded(3), bottom())) == 4);
    CHECK(size(modal(ModalOperator::probability(mpq_class(1, 2)), bottom())) == 6);
    CHECK(integerSize(0) == 0);
    CHECK(integerSize(1) == 1);
    CHECK(integerSize(-3) == 2);
    CHECK(integerSize(4) == 3);
}

TEST_CASE("modal atoms")
{
    CHECK(modalAtoms(bottom()).empty());
    Formula ba = modal(ModalOperator::box(), atom("a"));
    CHECK(modalAtoms(conj(ba, neg(ba))) == std::vector<Formula>{ba});
    Formula g1 = modal(ModalOperator::graded(1), atom("a")), g0 = modal(ModalOperator::graded(0), atom("a"));
    CHECK(modalAtoms(conj(g1, neg(g0))) == std::vector<Formula>{g1, g0});
}

TEST_CASE("printer uses sugar and round trips")
{
    CHECK(toString(parseFormula("true")) == "true");
    CHECK(toString(parseFormula("a | b")) == "a | b");
    CHECK(toString(parseFormula("a -> b")) == "a -> b");
    CHECK(toString(parseFormula("L{1/2} a")) == "L{1/2} a");
    CHECK(toString(parseFormula("[C 1,2] a")) == "[C 1,2] a");
}

TEST_CASE("property: parse inverts print on random formulas")
{
    testing::Rng rng(11);
    for (const LogicConfig& cfg : testing::allLogics())
        for (int k = 0; k < 300; ++k) {
            Formula f = testing::randomFormula(cfg, rng);
            INFO(toString(f));
            REQUIRE(parse(toString(f), cfg) == f);
        }
}

TEST_CASE("property: strict subformulas are smaller and no deeper")
{
    testing::Rng rng(12);
    for (const LogicConfig& cfg : testing::allLogics())
        for (int k = 0; k < 100; ++k) {
            Formula f = testing::randomFormula(cfg, rng);
            for (Formula g : subformulas(f))
                if (g != f) {
                    CHECK(size(g, cfg.agents) < size(f, cfg.agents));
                    CHECK(depth(g) <= depth(f));
                }
        }
}

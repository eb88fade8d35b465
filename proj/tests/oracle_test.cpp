#include <doctest.h>

#include "cmlsat/logics.hpp"
#include "cmlsat/oracle.hpp"
#include "cmlsat/parser.hpp"
#include "cmlsat/propositional.hpp"
#include "cmlsat/solver.hpp"
#include "support/generators.hpp"

using namespace cmlsat;

namespace {

RuleCode code(Logic logic, Scheme scheme, std::vector<bool> signs, std::vector<ModalOperator> ops, std::vector<long> coeffs = {},
              long bound = 0)
{
    RuleCode c;
    c.logic = logic;
    c.scheme = scheme;
    c.signs = std::move(signs);
    c.operators = std::move(ops);
    for (long x : coeffs)
        c.coeffs.push_back(x);
    c.bound = bound;
    return c;
}

ModalOperator G(unsigned long k) { return ModalOperator::graded(k); }
ModalOperator L(long a, long b) { return ModalOperator::probability(mpq_class(a, b)); }
const ModalOperator box = ModalOperator::box();

bool equivalent(Formula a, Formula b) { return propTautology(iff(a, b)); }

// Codes of the refutations at the root of an unsatisfiable trace.
std::vector<RuleCode> rootCodes(const char* logic, const char* text)
{
    LogicConfig cfg = LogicConfig::fromName(logic);
    Verdict v = satisfiable(parse(text, cfg), cfg);
    REQUIRE_FALSE(v.satisfiable);
    std::vector<RuleCode> out;
    for (const auto& r : v.trace->refutations)
        out.push_back(r.matching.code);
    return out;
}

} // namespace

TEST_CASE("one-step soundness examples")
{
    LogicConfig K = LogicConfig::fromName("K");
    OneStepReport kr = oneStepSound(code(Logic::K, Scheme::KRule, {true}, {box}), backendFor(K), 3);
    CHECK(kr.sound);
    CHECK(kr.valuations > 0);

    // premise-free conclusion <0>a: the graded code with premise a >= 0 is trivially true
    LogicConfig gml = LogicConfig::fromName("GML");
    RuleCode bogus = code(Logic::GML, Scheme::Graded, {true}, {G(0)}, {1}, 0);
    CHECK_FALSE(sideCondition(bogus, gml));
    OneStepReport bad = oneStepSound(bogus, backendFor(gml), 1);
    CHECK_FALSE(bad.sound);
    CHECK_FALSE(bad.counterexample.empty());

    // ~a / ~[]a needs seriality: it fails on the empty successor set
    RuleCode kd = code(Logic::KD, Scheme::KDRule, {false}, {box});
    CHECK_FALSE(oneStepSound(kd, backendFor(K), 1).sound);
    CHECK(oneStepSound(kd, backendFor(LogicConfig::fromName("KD")), 3).sound);
}

TEST_CASE("codes refuting the axioms are sound")
{
    for (auto [logic, text] : std::vector<std::pair<const char*, const char*>>{
             {"MAJ", "~(M a & M b -> <0>(a & b))"},
             {"MAJ", "~(W a & M b & <1>(~a & ~b) -> <2>(a & b))"},
             {"GML", "~(<2>a -> <1>a)"},
             {"PML", "L{3/5} a & L{3/5} ~a"},
             {"COAL:2", "~([C 1]a & [C 2]b -> [C 1,2](a & b))"},
             {"KD", "[]false"},
         }) {
        LogicConfig cfg = LogicConfig::fromName(logic);
        auto codes = rootCodes(logic, text);
        CHECK_FALSE(codes.empty());
        for (const auto& c : codes) {
            INFO(logic << " " << c.toString());
            CHECK(oneStepSound(c, backendFor(cfg), cfg.oracle.carrier).sound);
        }
    }
}

TEST_CASE("the printed graded side condition admits no code")
{
    // Sum_{r<0} r (k+1) is never positive, while 1 + Sum_{r>0} r k is at least 1.
    testing::Rng rng(51);
    LogicConfig gml = LogicConfig::fromName("GML");
    std::size_t admitted = 0, sound = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng.below(3);
        RuleCode c = code(Logic::GML, Scheme::Graded, {}, {});
        mpz_class lhs = 0, rhs = 1;
        for (std::size_t i = 0; i < n; ++i) {
            bool pos = rng.chance(50);
            unsigned long k = rng.below(4);
            long r = 1 + static_cast<long>(rng.below(3));
            c.signs.push_back(pos);
            c.operators.push_back(G(k));
            c.coeffs.push_back(pos ? r : -r);
            if (pos)
                rhs += r * static_cast<long>(k);
            else
                lhs += -r * static_cast<long>(k + 1);
        }
        CHECK(lhs <= 0);
        admitted += lhs >= rhs;
        // the derived convention flips the sign of the left side
        if (sideCondition(c, gml)) {
            CHECK(-lhs >= rhs);
            CHECK(oneStepSound(c, backendFor(gml), 2).sound);
            ++sound;
        }
    }
    CHECK(admitted == 0);
    CHECK(sound > 10);
}

TEST_CASE("brute-force models")
{
    LogicConfig K = LogicConfig::fromName("K");
    auto m = bruteForceSat(parse("[]false", K), K);
    REQUIRE(m);
    CHECK(m->states[m->root].successors.empty());

    LogicConfig gml = LogicConfig::fromName("GML");
    Formula g = parse("<1>p", gml);
    auto mg = bruteForceSat(g, gml);
    REQUIRE(mg);
    CHECK(modelCheck(*mg, mg->root, g));

    LogicConfig pml = LogicConfig::fromName("PML");
    CHECK_FALSE(bruteForceSat(parse("L{3/5} p & L{3/5} ~p", pml), pml));
    CHECK(bruteForceSat(parse("L{1/2} p & L{1/2} ~p", pml), pml));
    CHECK_FALSE(bruteForceSat(parse("[]false", LogicConfig::fromName("KD")), LogicConfig::fromName("KD")));
}

TEST_CASE("resolving two K instances gives a K instance")
{
    LogicConfig K = LogicConfig::fromName("K");
    RuleCode mono = code(Logic::K, Scheme::KRule, {false, true}, {box, box});
    RuleInstance r1 = instanceOf(mono, "a"), r2 = instanceOf(mono, "b");
    RuleInstance res = resolveRules(r1, 1, r2, 0);
    REQUIRE(res.conclusion.size() == 2);
    CHECK(equivalent(res.premise, implies(atom("a1"), atom("b2"))));
    auto sub = subsumingMatching(res, K);
    REQUIRE(sub);
    CHECK(sub->code.scheme != Scheme::Congruence);
    CHECK_THROWS_AS(resolveRules(r1, 0, r2, 0), ResolutionError);
}

TEST_CASE("probabilistic instances sum to an instance")
{
    LogicConfig pml = LogicConfig::fromName("PML");
    RuleCode c1 = code(Logic::PML, Scheme::Prob, {true, true}, {L(1, 2), L(1, 2)}, {1, 1}, 1);
    RuleCode c2 = code(Logic::PML, Scheme::Prob, {false, true}, {L(1, 2), L(1, 3)}, {-1, 1}, 0);
    REQUIRE(sideCondition(c1, pml));
    REQUIRE(sideCondition(c2, pml));
    RuleCode s = sumCode(c1, 0, c2, 0);
    CHECK(s.scheme == Scheme::Prob);
    CHECK(s.bound == 1);
    CHECK(s.coeffs == std::vector<mpz_class>{1, 1});
    CHECK(sideCondition(s, pml));
    ClosureReport r = resolutionClosure(c1, 0, c2, 0, pml);
    CHECK(r.subsumed);
    CHECK(r.sumCodeAdmissible);
}

TEST_CASE("graded instances sum to an instance")
{
    LogicConfig gml = LogicConfig::fromName("GML");
    RuleCode c1 = code(Logic::GML, Scheme::Graded, {false, true}, {G(1), G(0)}, {-1, 1}, 0);
    RuleCode c2 = code(Logic::GML, Scheme::Graded, {false, true}, {G(0), G(0)}, {-1, 1}, 0);
    RuleCode s = sumCode(c1, 1, c2, 0);
    CHECK(s.scheme == Scheme::Graded);
    CHECK(s.operators == std::vector<ModalOperator>{G(1), G(0)});
    CHECK(sideCondition(s, gml));
    CHECK(resolutionClosure(c1, 1, c2, 0, gml).subsumed);
}

TEST_CASE("strict completeness probes")
{
    Formula a = atom("a"), b = atom("b");
    Formula Ba = modal(box, a), Bb = modal(box, b);
    LogicConfig K = LogicConfig::fromName("K");
    auto mk = strictCompletenessProbe(backendFor(K), 1, {{a, 1}}, {{Ba, true}}, K);
    REQUIRE(mk);
    CHECK(mk->code.scheme == Scheme::KRule);

    LogicConfig E = LogicConfig::fromName("E");
    auto me = strictCompletenessProbe(backendFor(E), 2, {{a, 1}}, {{Ba, false}, {Ba, true}}, E);
    CHECK(me.has_value());

    LogicConfig M = LogicConfig::fromName("M");
    auto mm = strictCompletenessProbe(backendFor(M), 2, {{a, 1}, {b, 3}}, {{Ba, false}, {Bb, true}}, M);
    REQUIRE(mm);
    CHECK(mm->code.scheme == Scheme::Monotone);

    // []a is not valid when a is empty
    CHECK_THROWS_AS(strictCompletenessProbe(backendFor(K), 1, {{a, 0}}, {{Ba, true}}, K), std::invalid_argument);
}

TEST_CASE("game lifting quantifies over strategies exactly")
{
    LogicConfig coal = LogicConfig::fromName("COAL:2");
    FunctorBackend fb = backendFor(coal);
    FunctorElement t;
    // outcome = s1 xor s2, profile index s1 + 2 s2
    t.outcomes = {0, 1, 1, 0};
    CHECK_FALSE(liftedTruth(fb, t, ModalOperator::coalitionOf(1), 0b01));
    CHECK_FALSE(liftedTruth(fb, t, ModalOperator::coalitionOf(2), 0b01));
    CHECK(liftedTruth(fb, t, ModalOperator::coalitionOf(3), 0b01));
    CHECK(liftedTruth(fb, t, ModalOperator::coalitionOf(0), 0b11));
    CHECK_FALSE(liftedTruth(fb, t, ModalOperator::coalitionOf(0), 0b01));
    // agent 1 alone decides
    t.outcomes = {0, 1, 0, 1};
    CHECK(liftedTruth(fb, t, ModalOperator::coalitionOf(1), 0b10));
    CHECK_FALSE(liftedTruth(fb, t, ModalOperator::coalitionOf(2), 0b10));
}

TEST_CASE("element enumeration")
{
    auto count = [](const FunctorBackend& fb, int n) {
        std::size_t c = 0;
        forEachElement(fb, n, {}, [&](const FunctorElement&) {
            ++c;
            return true;
        });
        return c;
    };
    CHECK(count(backendFor(LogicConfig::fromName("K")), 2) == 4);
    CHECK(count(backendFor(LogicConfig::fromName("KD")), 2) == 3);
    CHECK(count(backendFor(LogicConfig::fromName("E")), 2) == 16);
    // monotone families are enumerated as generators of their upward closure
    CHECK(count(backendFor(LogicConfig::fromName("M")), 2) == 16);
    FunctorBackend tiny = backendFor(LogicConfig::fromName("E"));
    tiny.elementCap = 10;
    CHECK_THROWS_AS(count(tiny, 2), std::length_error);
}

TEST_CASE("property: oracle models satisfy their formula and never contradict the solver")
{
    testing::Rng rng(52);
    for (const LogicConfig& cfg : testing::allLogics())
        for (int k = 0; k < 40; ++k) {
            Formula f = k % 2 ? testing::denseFormula(cfg, rng) : testing::randomFormula(cfg, rng);
            std::optional<ModelWitness> m;
            try {
                m = bruteForceSat(f, cfg);
            } catch (const std::length_error&) {
                continue;
            }
            INFO(cfg.name() << " " << toString(f));
            if (m) {
                CHECK(modelCheck(*m, m->root, f));
                CHECK(satisfiable(f, cfg).satisfiable);
            }
        }
}

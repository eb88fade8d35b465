#include <doctest.h>

#include <algorithm>

#include "cmlsat/certificate_json.hpp"
#include "cmlsat/certificates.hpp"
#include "cmlsat/parser.hpp"
#include "cmlsat/solver.hpp"
#include "support/generators.hpp"

using namespace cmlsat;

namespace {

struct Fixture {
    LogicConfig cfg;
    Formula f;
    Verdict v;
};

Fixture run(const char* logic, const char* text)
{
    LogicConfig cfg = LogicConfig::fromName(logic);
    Formula f = parse(text, cfg);
    return {cfg, f, satisfiable(f, cfg)};
}

ShallowProof proofOf(const char* logic, const char* valid, LogicConfig& cfg, Formula& goal)
{
    cfg = LogicConfig::fromName(logic);
    goal = parse(valid, cfg);
    Verdict v = satisfiable(negate(goal), cfg);
    REQUIRE_FALSE(v.satisfiable);
    return extractProof(v.trace, goal);
}

void rulesIn(const ProofNode& n, std::vector<Scheme>& out, std::size_t& tautologies)
{
    for (const auto& c : n.clauses) {
        if (c.rule)
            out.push_back(c.rule->code.scheme);
        tautologies += c.tautology;
        for (const auto& p : c.premises)
            rulesIn(p, out, tautologies);
    }
}

ClauseProof* firstRule(ProofNode& n)
{
    for (auto& c : n.clauses) {
        if (c.rule)
            return &c;
        for (auto& p : c.premises)
            if (auto* r = firstRule(p))
                return r;
    }
    return nullptr;
}

mpq_class massOn(const ModelWitness& mw, int state, Formula f)
{
    mpq_class sum = 0;
    for (const auto& [s, w] : mw.states[state].probabilities)
        if (modelCheck(mw, s, f))
            sum += w;
    return sum;
}

mpz_class weightOn(const ModelWitness& mw, int state, Formula f)
{
    mpz_class sum = 0;
    for (const auto& [s, w] : mw.states[state].weights)
        if (modelCheck(mw, s, f))
            sum += w;
    return sum;
}

} // namespace

TEST_CASE("tableau examples")
{
    auto t = run("K", "true");
    ShallowTableau tb = extractTableau(t.v.trace);
    CHECK(tb.nodes.size() == 1);
    CHECK_FALSE(validateTableau(tb, t.f, t.cfg));

    auto k = run("K", "[]p & ~[]q");
    ShallowTableau two = extractTableau(k.v.trace);
    CHECK_FALSE(validateTableau(two, k.f, k.cfg));
    // one edge per demand: ~q, the congruence demand and p & ~q
    CHECK(two.edges.size() == 3);
    Formula kDemand = parse("p & ~q", k.cfg);
    CHECK(std::any_of(two.edges.begin(), two.edges.end(), [&](const TableauEdge& e) { return e.demand == kDemand; }));

    auto d = run("GML", "<1><0>p & ~<2>~<1>q");
    ShallowTableau deep = extractTableau(d.v.trace);
    CHECK_FALSE(validateTableau(deep, d.f, d.cfg));
    CHECK(tableauDepth(deep) <= 2);
}

TEST_CASE("model synthesis")
{
    auto k = run("K", "[]false");
    ModelResult mk = tableauToModel(extractTableau(k.v.trace), k.cfg);
    REQUIRE(mk.model);
    CHECK(mk.model->states[mk.model->root].successors.empty());

    auto g = run("GML", "<1>p");
    ModelResult mg = tableauToModel(extractTableau(g.v.trace), g.cfg);
    REQUIRE(mg.model);
    CHECK(weightOn(*mg.model, mg.model->root, atom("p")) == 2);

    auto pr = run("PML", "L{1/2} p & L{1/2} ~p");
    ModelResult mp = tableauToModel(extractTableau(pr.v.trace), pr.cfg);
    REQUIRE(mp.model);
    CHECK(massOn(*mp.model, mp.model->root, atom("p")) == mpq_class(1, 2));
    CHECK(massOn(*mp.model, mp.model->root, neg(atom("p"))) == mpq_class(1, 2));

    auto c = run("COAL:2", "[C 1]p & ~[C 2]q");
    CHECK_FALSE(tableauToModel(extractTableau(c.v.trace), c.cfg).model);
}

TEST_CASE("model checking clauses")
{
    Formula p = atom("p");
    ModelWitness kr;
    kr.kind = FrameKind::Kripke;
    kr.states.resize(2);
    kr.states[0].successors = {1};
    kr.states[1].atoms = {"p"};
    CHECK(modelCheck(kr, 0, modal(ModalOperator::box(), p)));
    CHECK_FALSE(modelCheck(kr, 1, p) == false);

    ModelWitness mg;
    mg.kind = FrameKind::Multigraph;
    mg.states.resize(2);
    mg.states[0].weights = {{1, 2}};
    mg.states[1].atoms = {"p"};
    CHECK(modelCheck(mg, 0, modal(ModalOperator::graded(1), p)));
    CHECK_FALSE(modelCheck(mg, 0, modal(ModalOperator::graded(2), p)));

    ModelWitness d;
    d.kind = FrameKind::Distribution;
    d.states.resize(3);
    d.states[0].probabilities = {{1, mpq_class(1, 2)}, {2, mpq_class(1, 2)}};
    d.states[1].atoms = {"p"};
    d.states[1].probabilities = {{1, 1}};
    d.states[2].probabilities = {{2, 1}};
    CHECK(modelCheck(d, 0, modal(ModalOperator::probability(mpq_class(1, 2)), p)));
    CHECK_FALSE(modelCheck(d, 0, modal(ModalOperator::probability(mpq_class(3, 5)), p)));
    CHECK_FALSE(witnessInvariantViolation(d, LogicConfig::fromName("PML")));
    d.states[0].probabilities[0].second = mpq_class(1, 3);
    CHECK(witnessInvariantViolation(d, LogicConfig::fromName("PML")));
}

TEST_CASE("proof examples")
{
    LogicConfig cfg;
    Formula goal;
    ShallowProof k = proofOf("K", "[](a -> b) -> ([]a -> []b)", cfg, goal);
    CHECK(checkProof(k, goal, cfg).ok);
    std::vector<Scheme> rules;
    std::size_t tautologies = 0;
    rulesIn(k, rules, tautologies);
    CHECK(rules == std::vector<Scheme>{Scheme::KRule});
    CHECK(weakSubformulaAudit(k, goal));

    ShallowProof pp = proofOf("K", "p -> p", cfg, goal);
    CHECK(checkProof(pp, goal, cfg).ok);
    rules.clear();
    rulesIn(pp, rules, tautologies);
    CHECK(rules.empty());

    ShallowProof g1 = proofOf("GML", "<2>p -> <1>p", cfg, goal);
    CHECK(checkProof(g1, goal, cfg).ok);
    rules.clear();
    rulesIn(g1, rules, tautologies);
    CHECK(std::find(rules.begin(), rules.end(), Scheme::Graded) != rules.end());
}

TEST_CASE("corrupted proofs are rejected")
{
    LogicConfig cfg;
    Formula goal;
    ShallowProof g1 = proofOf("GML", "<2>p -> <1>p", cfg, goal);
    ClauseProof* rule = firstRule(g1);
    REQUIRE(rule);
    REQUIRE(rule->rule->code.scheme == Scheme::Graded);
    // swapping the grades breaks the side condition
    std::swap(rule->rule->code.operators[0], rule->rule->code.operators[1]);
    CHECK_FALSE(checkProof(g1, goal, cfg).ok);

    ShallowProof k = proofOf("K", "[](a -> b) -> ([]a -> []b)", cfg, goal);
    ClauseProof* kr = firstRule(k);
    REQUIRE(kr);
    kr->rule.reset();
    kr->tautology = true;
    CHECK_FALSE(checkProof(k, goal, cfg).ok);

    ShallowProof flipped = proofOf("K", "[](a -> b) -> ([]a -> []b)", cfg, goal);
    ClauseProof* fr = firstRule(flipped);
    fr->clause[0].positive = !fr->clause[0].positive;
    CHECK_FALSE(checkProof(flipped, goal, cfg).ok);

    ShallowProof wrongGoal = proofOf("K", "[](a -> b) -> ([]a -> []b)", cfg, goal);
    CHECK_FALSE(checkProof(wrongGoal, parse("[](b -> a) -> ([]a -> []b)", cfg), cfg).ok);
}

TEST_CASE("corrupted tableaux and models are rejected")
{
    auto k = run("K", "[]p & ~[]q");
    ShallowTableau tb = extractTableau(k.v.trace);
    ShallowTableau noEdge = tb;
    noEdge.edges.clear();
    CHECK(validateTableau(noEdge, k.f, k.cfg));
    ShallowTableau wrongRoot = tb;
    wrongRoot.nodes[wrongRoot.root].label.literals[0].positive = false;
    CHECK(validateTableau(wrongRoot, k.f, k.cfg));

    auto b = run("K", "[]false");
    ModelWitness mw = *tableauToModel(extractTableau(b.v.trace), b.cfg).model;
    CertificateDocument ok{b.cfg, b.f, mw};
    CHECK_FALSE(checkCertificate(ok));
    mw.states.push_back({});
    mw.states[mw.root].successors.push_back(static_cast<int>(mw.states.size()) - 1);
    CertificateDocument bad{b.cfg, b.f, mw};
    CHECK(checkCertificate(bad));
}

TEST_CASE("json round trips")
{
    LogicConfig cfg;
    Formula goal;
    ShallowProof pf = proofOf("PML", "~(L{3/5} a & L{3/5} ~a)", cfg, goal);
    nlohmann::json j = toJson(CertificateDocument{cfg, goal, pf});
    CHECK(j["kind"] == "proof");
    CHECK(j["version"] == 1);
    CertificateDocument back = documentFromJson(nlohmann::json::parse(j.dump()));
    CHECK(back.formula == goal);
    CHECK(toJson(back) == j);
    CHECK_FALSE(checkCertificate(back));

    auto m = run("MAJ", "W p & ~<1>p");
    ShallowTableau tb = extractTableau(m.v.trace);
    nlohmann::json tj = toJson(CertificateDocument{m.cfg, m.f, tb});
    CHECK(toJson(documentFromJson(tj)) == tj);
    ModelWitness mw = *tableauToModel(tb, m.cfg).model;
    nlohmann::json mj = toJson(CertificateDocument{m.cfg, m.f, mw});
    CHECK(mj["kind"] == "model");
    CHECK(toJson(documentFromJson(mj)) == mj);

    nlohmann::json broken = tj;
    broken["version"] = 7;
    CHECK_THROWS_AS(documentFromJson(broken), CertificateError);
    broken = tj;
    broken["formula"] = "[] (";
    CHECK_THROWS_AS(documentFromJson(broken), CertificateError);
}

TEST_CASE("property: certificates check on random formulas")
{
    testing::Rng rng(41);
    for (const LogicConfig& cfg : testing::allLogics())
        for (int k = 0; k < 40; ++k) {
            Formula f = k % 2 ? testing::denseFormula(cfg, rng) : testing::randomFormula(cfg, rng);
            Verdict v = satisfiable(f, cfg);
            INFO(cfg.name() << " " << toString(f));
            if (v.satisfiable) {
                ShallowTableau tb = extractTableau(v.trace);
                CHECK_FALSE(validateTableau(tb, f, cfg));
                CHECK(tableauDepth(tb) <= depth(f));
                if (cfg.logic != Logic::Coal) {
                    ModelResult mr = tableauToModel(tb, cfg);
                    REQUIRE(mr.model);
                    CHECK(modelCheck(*mr.model, mr.model->root, f));
                }
            } else {
                ShallowProof pf = extractProof(v.trace, negate(f));
                CHECK(checkProof(pf, negate(f), cfg).ok);
                CHECK(weakSubformulaAudit(pf, negate(f)));
            }
        }
}

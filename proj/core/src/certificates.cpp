#include "cmlsat/certificates.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cmlsat/logics.hpp"
#include "cmlsat/lp.hpp"
#include "cmlsat/propositional.hpp"

namespace cmlsat {

namespace {

std::vector<std::pair<std::uint32_t, bool>> labelKey(const Pseudovaluation& h)
{
    std::vector<std::pair<std::uint32_t, bool>> key;
    for (const auto& l : h.literals)
        key.emplace_back(l.atom->id, l.positive);
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    return key;
}

std::vector<Literal> modalLiterals(const Pseudovaluation& h)
{
    std::vector<Literal> out;
    for (const auto& l : h.literals)
        if (!isAtom(l.atom))
            out.push_back(l);
    return out;
}

} // namespace

ShallowTableau extractTableau(const TracePtr& trace)
{
    if (!trace || !trace->satisfiable)
        throw std::invalid_argument("a tableau can only be extracted from a satisfiable trace");
    ShallowTableau tb;
    tb.formula = trace->formula;
    std::unordered_map<const SolveTrace*, int> byTrace;
    std::map<std::vector<std::pair<std::uint32_t, bool>>, int> byLabel;

    std::function<int(const TracePtr&)> add = [&](const TracePtr& t) -> int {
        auto it = byTrace.find(t.get());
        if (it != byTrace.end())
            return it->second;
        auto key = labelKey(t->chosen);
        auto lt = byLabel.find(key);
        if (lt != byLabel.end()) {
            byTrace[t.get()] = lt->second;
            return lt->second;
        }
        int idx = static_cast<int>(tb.nodes.size());
        TableauNode node;
        node.label = t->chosen;
        node.patternArguments = t->patternArguments;
        node.arithmetic = !t->patternArguments.empty();
        tb.nodes.push_back(std::move(node));
        byTrace[t.get()] = idx;
        byLabel[key] = idx;
        for (const auto& rec : t->demands) {
            int c = add(rec.child);
            TableauEdge e;
            e.parent = idx;
            e.child = c;
            e.demand = rec.demand;
            e.clause = rec.clause;
            e.matching = rec.matching;
            e.gamma = rec.gamma;
            tb.edges.push_back(std::move(e));
        }
        for (const auto& p : t->patterns) {
            int c = add(p.child);
            TableauEdge e;
            e.parent = idx;
            e.child = c;
            e.demand = p.formula;
            e.pattern = p.pattern;
            tb.edges.push_back(std::move(e));
        }
        return idx;
    };
    tb.root = add(trace);
    return tb;
}

int tableauDepth(const ShallowTableau& tb)
{
    const int n = static_cast<int>(tb.nodes.size());
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (const auto& e : tb.edges)
        if (e.parent >= 0 && e.parent < n && e.child >= 0 && e.child < n)
            out[static_cast<std::size_t>(e.parent)].push_back(e.child);
    std::vector<int> memo(static_cast<std::size_t>(n), -1), state(static_cast<std::size_t>(n), 0);
    bool cyclic = false;
    std::function<int(int)> go = [&](int u) {
        auto su = static_cast<std::size_t>(u);
        if (state[su] == 2)
            return memo[su];
        if (state[su] == 1) {
            cyclic = true;
            return 0;
        }
        state[su] = 1;
        int d = 0;
        for (int v : out[su])
            d = std::max(d, 1 + go(v));
        state[su] = 2;
        memo[su] = d;
        return d;
    };
    if (tb.root < 0 || tb.root >= n)
        return -1;
    int d = go(tb.root);
    return cyclic ? std::numeric_limits<int>::max() : d;
}

std::optional<std::string> validateTableau(const ShallowTableau& tb, Formula f, const LogicConfig& cfg)
{
    const int n = static_cast<int>(tb.nodes.size());
    if (n == 0 || tb.root < 0 || tb.root >= n)
        return std::string("tableau has no valid root");
    for (const auto& e : tb.edges)
        if (e.parent < 0 || e.parent >= n || e.child < 0 || e.child >= n || !e.demand)
            return std::string("edge endpoint out of range");
    const auto& rootLabel = tb.nodes[static_cast<std::size_t>(tb.root)].label;
    if (!pseudovaluationEntails(rootLabel, f))
        return "root label " + toString(rootLabel) + " does not entail the formula";
    int d = tableauDepth(tb);
    if (d > depth(f))
        return "tableau depth " + std::to_string(d) + " exceeds modal depth " + std::to_string(depth(f));

    std::vector<std::vector<const TableauEdge*>> out(static_cast<std::size_t>(n));
    for (const auto& e : tb.edges)
        out[static_cast<std::size_t>(e.parent)].push_back(&e);

    for (int i = 0; i < n; ++i) {
        const auto& node = tb.nodes[static_cast<std::size_t>(i)];
        std::string where = "node " + std::to_string(i) + ": ";
        if (!node.label.consistent())
            return where + "inconsistent label";
        for (const auto& l : node.label.literals)
            if (!cfg.legal(l.atom->op))
                return where + "operator not in the logic";
        for (const TableauEdge* e : out[static_cast<std::size_t>(i)])
            if (!pseudovaluationEntails(tb.nodes[static_cast<std::size_t>(e->child)].label, e->demand))
                return where + "child label does not entail demand " + toString(e->demand);
        std::vector<Literal> lits = modalLiterals(node.label);
        Pseudovaluation modalPart{lits};

        if (!cfg.arithmetic()) {
            for (const Clause& rho : enumerateContractedClauses(modalPart)) {
                for (const RuleMatching& m : matchings(rho, cfg)) {
                    Premise prem = premiseOf(m.code);
                    bool witnessed = false;
                    for (const TableauEdge* e : out[static_cast<std::size_t>(i)]) {
                        if (!e->matching || !(*e->matching == m) || e->clause != rho)
                            continue;
                        if (!premiseHasClause(prem, e->gamma))
                            continue;
                        if (e->demand != negatedClauseInstance(e->gamma, m.substitution))
                            continue;
                        witnessed = true;
                        break;
                    }
                    if (!witnessed)
                        return where + "no witness for the demands of " + m.code.toString() + " on clause " + toString(rho);
                }
            }
            continue;
        }

        SatPatternTable table;
        table.arguments = patternArguments(lits);
        for (const TableauEdge* e : out[static_cast<std::size_t>(i)]) {
            if (!e->pattern || table.arguments.size() >= 63 || *e->pattern >= (std::uint64_t(1) << table.arguments.size()))
                return where + "edge without a valid sign pattern";
            if (e->demand != patternFormula(table.arguments, *e->pattern))
                return where + "edge demand is not its pattern formula";
            table.satisfiable.push_back(*e->pattern);
        }
        for (const Clause& rho : enumerateContractedClauses(modalPart)) {
            std::vector<std::uint64_t> js = projectPatterns(table, rho);
            for (const RuleMatching& m : congruenceMatchings(rho, cfg.logic)) {
                std::size_t negIdx = rho[0].positive ? 1 : 0, posIdx = 1 - negIdx;
                std::vector<std::uint64_t> remapped;
                for (std::uint64_t J : js)
                    remapped.push_back(((J >> negIdx) & 1) | (((J >> posIdx) & 1) << 1));
                Premise premise = premiseOf(m.code);
                const auto& clauses = std::get<ClausePremise>(premise).clauses;
                if (!std::any_of(clauses.begin(), clauses.end(), [&](const VarClause& g) { return patternFalsifies(g, remapped); }))
                    return where + "congruence refutes clause " + toString(rho);
            }
            MatchingSearch s = refutingMatchingExists(rho, js, cfg);
            if (s.matching)
                return where + "clause " + toString(rho) + " is refuted by " + s.matching->code.toString();
        }
    }
    return std::nullopt;
}

namespace {

struct ModelBuilder {
    const ShallowTableau& tb;
    const LogicConfig& cfg;
    ModelWitness mw;
    int topState = -1;

    int top()
    {
        if (topState >= 0)
            return topState;
        topState = static_cast<int>(mw.states.size());
        WitnessState st;
        if (mw.kind == FrameKind::Kripke)
            st.successors = {topState};
        if (mw.kind == FrameKind::Distribution)
            st.probabilities = {{topState, mpq_class(1)}};
        mw.states.push_back(std::move(st));
        return topState;
    }

    std::vector<int> truthSet(const std::vector<int>& ys, Formula arg)
    {
        std::vector<int> out;
        for (int y : ys)
            if (modelCheck(mw, y, arg))
                out.push_back(y);
        return out;
    }

    std::optional<std::string> build(int u, const std::vector<int>& children)
    {
        const auto& label = tb.nodes[static_cast<std::size_t>(u)].label;
        std::vector<Literal> lits = modalLiterals(label);
        WitnessState& placeholder = mw.states[static_cast<std::size_t>(u)];
        for (const auto& l : label.literals)
            if (isAtom(l.atom) && l.positive)
                placeholder.atoms.push_back(l.atom->op.name);
        std::sort(placeholder.atoms.begin(), placeholder.atoms.end());

        switch (cfg.logic) {
        case Logic::K:
        case Logic::KD: {
            std::vector<int> succ;
            for (int c : children) {
                bool ok = true;
                for (const auto& l : lits)
                    if (l.positive && !modelCheck(mw, c, l.atom->lhs))
                        ok = false;
                if (ok)
                    succ.push_back(c);
            }
            if (succ.empty() && cfg.logic == Logic::KD) {
                bool anyPositive = std::any_of(lits.begin(), lits.end(), [](const Literal& l) { return l.positive; });
                if (anyPositive)
                    return std::string("no successor satisfies the boxed formulas");
                succ.push_back(top());
            }
            mw.states[static_cast<std::size_t>(u)].successors = succ;
            break;
        }
        case Logic::E:
        case Logic::M: {
            WitnessState& st = mw.states[static_cast<std::size_t>(u)];
            st.support = children;
            std::set<std::vector<int>> family;
            for (const auto& l : lits)
                if (l.positive)
                    family.insert(truthSet(children, l.atom->lhs));
            mw.states[static_cast<std::size_t>(u)].neighbourhoods.assign(family.begin(), family.end());
            break;
        }
        case Logic::GML:
        case Logic::MAJ: {
            const std::size_t q = children.size();
            LinearProgram lp;
            lp.vars = q;
            lp.objective.assign(q, 1);
            for (const auto& l : lits) {
                std::vector<int> in = truthSet(children, l.atom->lhs);
                std::vector<mpq_class> row(q);
                for (std::size_t j = 0; j < q; ++j) {
                    bool inside = std::find(in.begin(), in.end(), children[j]) != in.end();
                    if (l.atom->op.kind == OpKind::Graded)
                        row[j] = inside ? 1 : 0;
                    else
                        row[j] = inside ? 1 : -1;  // B(A) - B(X - A)
                }
                if (l.atom->op.kind == OpKind::Graded) {
                    mpq_class k = static_cast<unsigned long>(l.atom->op.grade);
                    if (l.positive)
                        lp.add(row, Sense::GE, k + 1);
                    else
                        lp.add(row, Sense::LE, k);
                } else {
                    if (l.positive)
                        lp.add(row, Sense::GE, 0);
                    else
                        lp.add(row, Sense::LE, -1);
                }
            }
            IlpResult r = solveIlp(lp, std::vector<long>(q, cfg.weightBound));
            if (!r.feasible)
                return std::string(r.exhausted ? "multiplicity search exhausted its node limit"
                                               : "no multiplicities within the weight bound " + std::to_string(cfg.weightBound));
            for (std::size_t j = 0; j < q; ++j)
                if (r.x[j] > 0)
                    mw.states[static_cast<std::size_t>(u)].weights.emplace_back(children[j], r.x[j]);
            break;
        }
        case Logic::PML: {
            std::vector<int> ys = children;
            if (ys.empty())
                ys.push_back(top());
            const std::size_t q = ys.size();
            LinearProgram lp;
            lp.vars = q + 1;  // probabilities, slack t
            lp.objective.assign(q + 1, 0);
            lp.objective[q] = 1;
            lp.maximize = true;
            std::vector<mpq_class> ones(q + 1, 1);
            ones[q] = 0;
            lp.add(ones, Sense::EQ, 1);
            std::vector<mpq_class> tRow(q + 1);
            tRow[q] = 1;
            lp.add(tRow, Sense::LE, 1);
            bool anyNegative = false;
            for (const auto& l : lits) {
                std::vector<int> in = truthSet(ys, l.atom->lhs);
                std::vector<mpq_class> row(q + 1);
                for (std::size_t j = 0; j < q; ++j)
                    row[j] = std::find(in.begin(), in.end(), ys[j]) != in.end() ? 1 : 0;
                if (l.positive) {
                    lp.add(row, Sense::GE, l.atom->op.prob);
                } else {
                    anyNegative = true;
                    row[q] = 1;
                    lp.add(row, Sense::LE, l.atom->op.prob);
                }
            }
            LpResult r = solveLp(lp);
            if (r.status != LpStatus::Optimal || (anyNegative && sgn(r.x[q]) <= 0))
                return std::string("no distribution over the children meets the probability bounds");
            for (std::size_t j = 0; j < q; ++j)
                if (sgn(r.x[j]) > 0)
                    mw.states[static_cast<std::size_t>(u)].probabilities.emplace_back(ys[j], r.x[j]);
            break;
        }
        case Logic::Coal:
            return std::string("coalition models are not synthesized");
        }
        for (const auto& l : lits)
            if (modelCheck(mw, u, l.atom) != l.positive)
                return "constructed state violates literal " + toString(l);
        return std::nullopt;
    }
};

} // namespace

ModelResult tableauToModel(const ShallowTableau& tb, const LogicConfig& cfg)
{
    ModelResult res;
    if (cfg.logic == Logic::Coal) {
        res.note = "coalition models are not synthesized; the tableau is the certificate";
        return res;
    }
    const int n = static_cast<int>(tb.nodes.size());
    ModelBuilder b{tb, cfg, {}, -1};
    b.mw.kind = frameFor(cfg.logic);
    b.mw.upwardClosed = cfg.logic == Logic::M;
    b.mw.root = tb.root;
    b.mw.states.resize(static_cast<std::size_t>(n));

    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (const auto& e : tb.edges)
        children[static_cast<std::size_t>(e.parent)].push_back(e.child);
    for (auto& c : children) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::vector<int> state(static_cast<std::size_t>(n), 0);
    std::optional<std::string> failure;
    std::function<void(int)> post = [&](int u) {
        auto su = static_cast<std::size_t>(u);
        if (state[su] != 0 || failure)
            return;
        state[su] = 1;
        for (int c : children[su])
            post(c);
        if (failure)
            return;
        failure = b.build(u, children[su]);
        if (failure)
            failure = "node " + std::to_string(u) + ": " + *failure;
        state[su] = 2;
    };
    for (int u = 0; u < n; ++u)
        post(u);
    if (failure) {
        res.note = *failure;
        return res;
    }
    res.model = std::move(b.mw);
    return res;
}

namespace {

ProofNode buildProof(const TracePtr& t, Formula goal)
{
    if (t->satisfiable)
        throw std::invalid_argument("cannot extract a proof from a satisfiable trace: " + toString(t->formula));
    ProofNode node;
    node.goal = goal;
    for (const auto& ref : t->refutations) {
        ClauseProof cp;
        for (const auto& l : ref.candidate.literals)
            cp.clause.push_back(l.negated());
        cp.rule = ref.matching;
        for (const auto& rec : ref.failedDemands)
            cp.premises.push_back(buildProof(rec.child, instantiatedClause(rec.gamma, rec.matching.substitution)));
        node.clauses.push_back(std::move(cp));
    }
    return node;
}

ProofCheck fail(const std::string& path, const std::string& reason) { return {false, path.empty() ? "/" : path, reason}; }

ProofCheck checkNode(const ProofNode& node, Formula goal, const LogicConfig& cfg, const std::string& path)
{
    if (node.goal != goal)
        return fail(path, "goal " + (node.goal ? toString(node.goal) : std::string("<none>")) + " differs from expected " + toString(goal));
    std::vector<Formula> cs;
    for (const auto& c : node.clauses)
        cs.push_back(clauseFormula(c.clause));
    if (!propTautology(implies(conjAll(cs), goal), cfg.truthTableLimit))
        return fail(path, "clauses do not propositionally entail the goal");
    for (std::size_t i = 0; i < node.clauses.size(); ++i) {
        const ClauseProof& cp = node.clauses[i];
        std::string here = path + "/clause" + std::to_string(i);
        if (cp.tautology) {
            if (!clauseIsTautology(cp.clause))
                return fail(here, "leaf clause is not a tautology");
            continue;
        }
        if (!cp.rule)
            return fail(here, "clause has neither a rule nor a tautology mark");
        const RuleMatching& m = *cp.rule;
        if (m.substitution.size() != m.code.arity() || std::any_of(m.substitution.begin(), m.substitution.end(), [](Formula x) { return x == nullptr; }))
            return fail(here, "substitution does not cover the rule variables");
        if (!sideCondition(m.code, cfg))
            return fail(here, "side condition fails for " + m.code.toString());
        if (!clauseEntails(m.conclusion(), cp.clause))
            return fail(here, "rule conclusion does not entail the clause");
        std::vector<VarClause> premise = premiseCnfClauses(premiseOf(m.code));
        if (premise.size() != cp.premises.size())
            return fail(here, "expected " + std::to_string(premise.size()) + " premise proofs, found " + std::to_string(cp.premises.size()));
        for (std::size_t j = 0; j < premise.size(); ++j) {
            ProofCheck r = checkNode(cp.premises[j], instantiatedClause(premise[j], m.substitution), cfg, here + "/premise" + std::to_string(j));
            if (!r.ok)
                return r;
        }
    }
    return {};
}

void collectAtoms(const ProofNode& node, std::vector<Formula>& out)
{
    for (Formula a : modalAtoms(node.goal))
        out.push_back(a);
    for (const auto& cp : node.clauses) {
        for (const auto& l : cp.clause)
            out.push_back(l.atom);
        if (cp.rule)
            for (const auto& l : cp.rule->conclusion())
                out.push_back(l.atom);
        for (const auto& p : cp.premises)
            collectAtoms(p, out);
    }
}

} // namespace

ShallowProof extractProof(const TracePtr& trace, Formula goal)
{
    if (!trace)
        throw std::invalid_argument("missing trace");
    return buildProof(trace, goal);
}

ProofCheck checkProof(const ShallowProof& pf, Formula goal, const LogicConfig& cfg) { return checkNode(pf, goal, cfg, ""); }

bool weakSubformulaAudit(const ShallowProof& pf, Formula goal)
{
    std::unordered_set<Formula> allowed;
    for (Formula g : subformulas(goal))
        if (isModal(g))
            allowed.insert(g);
    std::vector<Formula> seen;
    collectAtoms(pf, seen);
    return std::all_of(seen.begin(), seen.end(), [&](Formula a) { return allowed.count(a) > 0; });
}

std::size_t proofSize(const ShallowProof& pf)
{
    std::size_t n = 1;
    for (const auto& cp : pf.clauses) {
        ++n;
        for (const auto& p : cp.premises)
            n += proofSize(p);
    }
    return n;
}

} // namespace cmlsat

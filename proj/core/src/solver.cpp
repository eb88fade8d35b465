#include "cmlsat/solver.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "cmlsat/propositional.hpp"

namespace cmlsat {

std::vector<Clause> enumerateContractedClauses(const Pseudovaluation& h)
{
    std::vector<Clause> out;
    const std::size_t n = h.literals.size();
    if (n >= 63)
        throw std::length_error("too many literals in pseudovaluation");
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        Clause c;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t(1) << i))
                c.push_back(h.literals[i].negated());
        out.push_back(std::move(c));
    }
    return out;
}

Formula patternFormula(const std::vector<Formula>& args, std::uint64_t pattern)
{
    VarClause gamma;
    for (std::size_t j = 0; j < args.size(); ++j)
        gamma.push_back({static_cast<int>(j), ((pattern >> j) & 1) == 0});
    return negatedClauseInstance(gamma, args);
}

std::vector<Formula> patternArguments(const std::vector<Literal>& literals)
{
    std::vector<Formula> args;
    for (const auto& l : literals)
        if (!isAtom(l.atom) && std::find(args.begin(), args.end(), l.atom->lhs) == args.end())
            args.push_back(l.atom->lhs);
    return args;
}

bool patternFalsifies(const VarClause& gamma, const std::vector<std::uint64_t>& satisfiable)
{
    for (std::uint64_t J : satisfiable) {
        bool falsified = std::all_of(gamma.begin(), gamma.end(),
                                     [&](const VarLiteral& l) { return (((J >> l.var) & 1) != 0) != l.positive; });
        if (falsified)
            return true;
    }
    return false;
}

Solver::Solver(LogicConfig cfg) : cfg_(std::move(cfg)) {}

void Solver::noteCaveat(const std::string& msg)
{
    if (!caveat_)
        caveat_ = msg;
}

Verdict Solver::solve(Formula f)
{
    checkLegal(f, cfg_);
    rootDepth_ = depth(f);
    caveat_.reset();
    Verdict v;
    v.trace = visit(f, 0);
    v.satisfiable = v.trace->satisfiable;
    v.caveat = caveat_;
    v.stats = stats_;
    return v;
}

bool Solver::demandSatisfiable(const Clause& rho, const RuleMatching& m)
{
    (void)rho;
    PremiseClauseEnumerator e(premiseOf(m.code));
    while (auto gamma = e.next()) {
        Formula d = negatedClauseInstance(*gamma, m.substitution);
        rootDepth_ = std::max(rootDepth_, depth(d));
        if (visit(d, 0)->satisfiable)
            return true;
    }
    return false;
}

bool Solver::refuteShape(const Pseudovaluation& h, const std::vector<Literal>& modalLits, int level, SolveTrace& sat,
                         std::optional<Refutation>& why)
{
    Pseudovaluation modalPart{modalLits};
    for (Clause& rho : enumerateContractedClauses(modalPart)) {
        for (RuleMatching& m : matchings(rho, cfg_)) {
            ++stats_.matchingsExplored;
            std::vector<DemandRecord> failed;
            bool met = false;
            PremiseClauseEnumerator e(premiseOf(m.code));
            while (auto gamma = e.next()) {
                Formula d = negatedClauseInstance(*gamma, m.substitution);
                TracePtr child = visit(d, level + 1);
                DemandRecord rec{rho, m, *gamma, d, child};
                if (child->satisfiable) {
                    sat.demands.push_back(std::move(rec));
                    met = true;
                    break;
                }
                failed.push_back(std::move(rec));
            }
            if (!met) {
                why = Refutation{h, rho, m, std::move(failed)};
                return true;
            }
        }
    }
    return false;
}

bool Solver::refuteArithmetic(const Pseudovaluation& h, const std::vector<Literal>& modalLits, const SatPatternTable& table,
                              int level, std::optional<Refutation>& why)
{
    Pseudovaluation modalPart{modalLits};
    for (Clause& rho : enumerateContractedClauses(modalPart)) {
        std::vector<std::uint64_t> js = projectPatterns(table, rho);
        std::optional<RuleMatching> refuting;
        for (RuleMatching& m : congruenceMatchings(rho, cfg_.logic)) {
            ++stats_.matchingsExplored;
            Premise premise = premiseOf(m.code);
            const auto& clauses = std::get<ClausePremise>(premise).clauses;
            // congruence variables follow the code, not rho: remap to rho's literal order
            std::vector<std::uint64_t> remapped;
            std::size_t negIdx = rho[0].positive ? 1 : 0, posIdx = 1 - negIdx;
            for (std::uint64_t J : js)
                remapped.push_back(((J >> negIdx) & 1) | (((J >> posIdx) & 1) << 1));
            bool someSat = std::any_of(clauses.begin(), clauses.end(), [&](const VarClause& g) { return patternFalsifies(g, remapped); });
            if (!someSat) {
                refuting = m;
                break;
            }
        }
        if (!refuting) {
            ++stats_.matchingsExplored;
            MatchingSearch search = refutingMatchingExists(rho, js, cfg_);
            stats_.lpCalls += search.lpCalls;
            if (search.matching) {
                if (search.exceedsBound)
                    noteCaveat("refuting matching uses coefficients beyond the configured bound " + std::to_string(cfg_.coeffBound) +
                               ": " + search.matching->code.toString());
                refuting = std::move(search.matching);
            }
        }
        if (!refuting)
            continue;
        std::vector<DemandRecord> failed;
        PremiseClauseEnumerator e(premiseOf(refuting->code));
        while (auto gamma = e.next()) {
            Formula d = negatedClauseInstance(*gamma, refuting->substitution);
            TracePtr child = visit(d, level + 1);
            if (child->satisfiable)
                throw std::logic_error("refuting matching has a satisfiable demand: " + toString(d));
            failed.push_back(DemandRecord{rho, *refuting, *gamma, d, child});
        }
        why = Refutation{h, rho, *refuting, std::move(failed)};
        return true;
    }
    return false;
}

TracePtr Solver::visit(Formula f, int level)
{
    if (level > rootDepth_)
        throw std::logic_error("recursion level exceeds the modal depth of the input");
    if (cfg_.memoize) {
        auto it = memo_.find(f);
        if (it != memo_.end()) {
            ++stats_.memoHits;
            return it->second;
        }
    }
    ++stats_.nodes;
    stats_.maxLevel = std::max(stats_.maxLevel, level);

    auto trace = std::make_shared<SolveTrace>();
    trace->formula = f;
    trace->level = level;

    std::optional<SatPatternTable> table;
    std::vector<PatternChild> patternChildren;
    if (cfg_.arithmetic()) {
        std::vector<Literal> all;
        for (Formula a : modalAtoms(f))
            all.push_back({a, true});
        SatPatternTable t;
        t.arguments = patternArguments(all);
        if (t.arguments.size() >= 63)
            throw std::length_error("too many modal arguments");
        const std::uint64_t count = t.arguments.empty() ? 0 : (std::uint64_t(1) << t.arguments.size());
        for (std::uint64_t p = 0; p < count; ++p) {
            Formula pf = patternFormula(t.arguments, p);
            if (depth(pf) >= depth(f) && depth(f) > 0)
                throw std::logic_error("pattern query does not descend in depth");
            TracePtr child = visit(pf, level + 1);
            if (child->satisfiable) {
                t.satisfiable.push_back(p);
                patternChildren.push_back({p, pf, child});
            }
        }
        table = std::move(t);
    }

    PseudovaluationEnumerator candidates(f);
    while (auto h = candidates.next()) {
        std::vector<Literal> modalLits;
        for (const auto& l : h->literals)
            if (!isAtom(l.atom))
                modalLits.push_back(l);
        std::optional<Refutation> why;
        SolveTrace sat;
        bool refuted = table ? refuteArithmetic(*h, modalLits, *table, level, why) : refuteShape(*h, modalLits, level, sat, why);
        if (refuted) {
            trace->refutations.push_back(std::move(*why));
            continue;
        }
        trace->satisfiable = true;
        trace->chosen = *h;
        trace->demands = std::move(sat.demands);
        if (table) {
            trace->patternArguments = table->arguments;
            trace->patterns = patternChildren;
        }
        trace->refutations.clear();
        break;
    }

    TracePtr out = trace;
    if (cfg_.memoize)
        memo_.emplace(f, out);
    return out;
}

Verdict satisfiable(Formula f, const LogicConfig& cfg)
{
    Solver s(cfg);
    return s.solve(f);
}

namespace {

int traceDepthRec(const SolveTrace* t, std::unordered_map<const SolveTrace*, int>& memo)
{
    auto it = memo.find(t);
    if (it != memo.end())
        return it->second;
    int d = 0;
    auto see = [&](const TracePtr& c) {
        if (c)
            d = std::max(d, 1 + traceDepthRec(c.get(), memo));
    };
    for (const auto& r : t->demands)
        see(r.child);
    for (const auto& p : t->patterns)
        see(p.child);
    for (const auto& ref : t->refutations)
        for (const auto& r : ref.failedDemands)
            see(r.child);
    memo[t] = d;
    return d;
}

} // namespace

int traceDepth(const TracePtr& t)
{
    std::unordered_map<const SolveTrace*, int> memo;
    return traceDepthRec(t.get(), memo);
}

} // namespace cmlsat

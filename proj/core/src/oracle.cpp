#include "cmlsat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "cmlsat/logics.hpp"
#include "cmlsat/propositional.hpp"
#include "cmlsat/solver.hpp"

namespace cmlsat {

std::string backendName(BackendKind k)
{
    switch (k) {
    case BackendKind::Powerset:
        return "powerset";
    case BackendKind::NonemptyPowerset:
        return "nonempty-powerset";
    case BackendKind::Neighbourhood:
        return "neighbourhood";
    case BackendKind::UpwardNeighbourhood:
        return "upward-neighbourhood";
    case BackendKind::Multiset:
        return "multiset";
    case BackendKind::Distribution:
        return "distribution";
    case BackendKind::Game:
        return "game";
    }
    return "?";
}

FunctorBackend backendFor(const LogicConfig& cfg)
{
    FunctorBackend fb;
    fb.maxMultiplicity = cfg.oracle.multiplicity;
    fb.maxDenominator = cfg.oracle.denominator;
    fb.agents = cfg.agents;
    fb.strategies = cfg.oracle.strategies;
    fb.elementCap = cfg.oracle.elementCap;
    switch (cfg.logic) {
    case Logic::K:
        fb.kind = BackendKind::Powerset;
        break;
    case Logic::KD:
        fb.kind = BackendKind::NonemptyPowerset;
        break;
    case Logic::E:
        fb.kind = BackendKind::Neighbourhood;
        break;
    case Logic::M:
        fb.kind = BackendKind::UpwardNeighbourhood;
        break;
    case Logic::GML:
    case Logic::MAJ:
        fb.kind = BackendKind::Multiset;
        break;
    case Logic::PML:
        fb.kind = BackendKind::Distribution;
        break;
    case Logic::Coal:
        fb.kind = BackendKind::Game;
        break;
    }
    return fb;
}

namespace {

void guard(const FunctorBackend& fb, double count)
{
    if (count > static_cast<double>(fb.elementCap))
        throw std::length_error(backendName(fb.kind) + " enumeration exceeds the element cap");
}

double power(double base, double exp) { return std::pow(base, exp); }

std::vector<long> denominators(const FunctorBackend& fb)
{
    std::set<long> ds;
    for (long d = 1; d <= fb.maxDenominator; ++d)
        ds.insert(d);
    for (int d : fb.extraDenominators)
        if (d > 0)
            ds.insert(d);
    return {ds.begin(), ds.end()};
}

// Compositions of total into n nonnegative parts, lexicographic.
bool nextComposition(std::vector<long>& parts, long total)
{
    const std::size_t n = parts.size();
    if (n <= 1)
        return false;
    // find rightmost position (excluding last) that can move one unit to the right
    for (std::size_t i = n - 1; i-- > 0;) {
        if (parts[i] > 0) {
            --parts[i];
            long rest = 0;
            for (std::size_t k = i + 1; k < n; ++k)
                rest += parts[k];
            for (std::size_t k = i + 1; k < n; ++k)
                parts[k] = 0;
            parts[i + 1] = rest + 1;
            (void)total;
            return true;
        }
    }
    return false;
}

std::size_t profileCount(const FunctorBackend& fb)
{
    std::size_t p = 1;
    for (int a = 0; a < fb.agents; ++a)
        p *= static_cast<std::size_t>(fb.strategies);
    return p;
}

} // namespace

void forEachElement(const FunctorBackend& fb, int n, const std::vector<std::uint64_t>& relevant,
                    const std::function<bool(const FunctorElement&)>& visit)
{
    if (n < 0 || n > 20)
        throw std::length_error("carrier too large");
    FunctorElement t;
    switch (fb.kind) {
    case BackendKind::Powerset:
    case BackendKind::NonemptyPowerset: {
        guard(fb, power(2, n));
        std::uint64_t first = fb.kind == BackendKind::NonemptyPowerset ? 1 : 0;
        for (std::uint64_t s = first; s < (std::uint64_t(1) << n); ++s) {
            t.subset = s;
            if (!visit(t))
                return;
        }
        return;
    }
    case BackendKind::Neighbourhood:
    case BackendKind::UpwardNeighbourhood: {
        std::vector<std::uint64_t> sets = relevant;
        if (sets.empty())
            for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a)
                sets.push_back(a);
        std::sort(sets.begin(), sets.end());
        sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
        if (sets.size() >= 40)
            throw std::length_error("neighbourhood enumeration exceeds the element cap");
        guard(fb, power(2, static_cast<double>(sets.size())));
        for (std::uint64_t choice = 0; choice < (std::uint64_t(1) << sets.size()); ++choice) {
            t.family.clear();
            for (std::size_t k = 0; k < sets.size(); ++k)
                if ((choice >> k) & 1)
                    t.family.push_back(sets[k]);
            if (!visit(t))
                return;
        }
        return;
    }
    case BackendKind::Multiset: {
        const long w = fb.maxMultiplicity;
        guard(fb, power(static_cast<double>(w + 1), n));
        t.weights.assign(static_cast<std::size_t>(n), 0);
        for (;;) {
            if (!visit(t))
                return;
            std::size_t i = 0;
            while (i < t.weights.size() && t.weights[i] == w)
                t.weights[i++] = 0;
            if (i == t.weights.size())
                return;
            ++t.weights[i];
        }
    }
    case BackendKind::Distribution: {
        if (n == 0)
            return;
        std::vector<long> ds = denominators(fb);
        std::set<long> dset(ds.begin(), ds.end());
        double total = 0;
        for (long d : ds)
            total += std::tgamma(static_cast<double>(d + n)) / (std::tgamma(static_cast<double>(d + 1)) * std::tgamma(static_cast<double>(n)));
        guard(fb, total);
        for (long d : ds) {
            t.denominator = d;
            t.numerators.assign(static_cast<std::size_t>(n), 0);
            t.numerators[0] = d;
            do {
                long g = d;
                for (long x : t.numerators)
                    g = std::gcd(g, x);
                if (g > 1 && dset.count(d / g))
                    continue;  // already visited in lowest terms
                if (!visit(t))
                    return;
            } while (nextComposition(t.numerators, d));
        }
        return;
    }
    case BackendKind::Game: {
        if (n == 0)
            return;
        const std::size_t profiles = profileCount(fb);
        guard(fb, power(n, static_cast<double>(profiles)));
        t.outcomes.assign(profiles, 0);
        for (;;) {
            if (!visit(t))
                return;
            std::size_t i = 0;
            while (i < profiles && t.outcomes[i] == n - 1)
                t.outcomes[i++] = 0;
            if (i == profiles)
                return;
            ++t.outcomes[i];
        }
    }
    }
}

bool liftedTruth(const FunctorBackend& fb, const FunctorElement& t, const ModalOperator& op, std::uint64_t mask)
{
    switch (fb.kind) {
    case BackendKind::Powerset:
    case BackendKind::NonemptyPowerset:
        return (t.subset & ~mask) == 0;
    case BackendKind::Neighbourhood:
        return std::find(t.family.begin(), t.family.end(), mask) != t.family.end();
    case BackendKind::UpwardNeighbourhood:
        return std::any_of(t.family.begin(), t.family.end(), [&](std::uint64_t b) { return (b & ~mask) == 0; });
    case BackendKind::Multiset: {
        long in = 0, out = 0;
        for (std::size_t x = 0; x < t.weights.size(); ++x)
            ((mask >> x) & 1 ? in : out) += t.weights[x];
        if (op.kind == OpKind::Graded)
            return in > static_cast<long>(op.grade);
        if (op.kind == OpKind::Majority)
            return in >= out;
        break;
    }
    case BackendKind::Distribution: {
        if (op.kind != OpKind::Prob)
            break;
        long in = 0;
        for (std::size_t x = 0; x < t.numerators.size(); ++x)
            if ((mask >> x) & 1)
                in += t.numerators[x];
        return mpq_class(in, t.denominator) >= op.prob;
    }
    case BackendKind::Game: {
        if (op.kind != OpKind::Coalition)
            break;
        const int s = fb.strategies;
        const std::size_t profiles = t.outcomes.size();
        // enumerate choices of the coalition as profiles with zeros outside C
        std::vector<int> inC, outC;
        for (int a = 0; a < fb.agents; ++a)
            ((op.coalition >> a) & 1 ? inC : outC).push_back(a);
        std::vector<int> profile(static_cast<std::size_t>(fb.agents), 0);
        auto index = [&] {
            std::size_t idx = 0, radix = 1;
            for (int a = 0; a < fb.agents; ++a) {
                idx += static_cast<std::size_t>(profile[static_cast<std::size_t>(a)]) * radix;
                radix *= static_cast<std::size_t>(s);
            }
            return idx;
        };
        auto advance = [&](const std::vector<int>& agents) {
            for (int a : agents) {
                if (++profile[static_cast<std::size_t>(a)] < s)
                    return true;
                profile[static_cast<std::size_t>(a)] = 0;
            }
            return false;
        };
        (void)profiles;
        do {
            for (int a : outC)
                profile[static_cast<std::size_t>(a)] = 0;
            bool forced = true;
            do {
                if (!((mask >> t.outcomes[index()]) & 1)) {
                    forced = false;
                    break;
                }
            } while (advance(outC));
            if (forced)
                return true;
        } while (advance(inC));
        return false;
    }
    }
    throw std::invalid_argument("operator " + operatorString(op) + " has no lifting over the " + backendName(fb.kind) + " backend");
}

namespace {

std::string maskString(std::uint64_t m, int n)
{
    std::string s = "{";
    bool first = true;
    for (int x = 0; x < n; ++x)
        if ((m >> x) & 1) {
            s += (first ? "" : ",") + std::to_string(x);
            first = false;
        }
    return s + "}";
}

std::string describe(const FunctorBackend& fb, const FunctorElement& t, int n)
{
    std::string s;
    switch (fb.kind) {
    case BackendKind::Powerset:
    case BackendKind::NonemptyPowerset:
        return maskString(t.subset, n);
    case BackendKind::Neighbourhood:
    case BackendKind::UpwardNeighbourhood:
        s = "{";
        for (std::size_t k = 0; k < t.family.size(); ++k)
            s += (k ? "," : "") + maskString(t.family[k], n);
        return s + "}";
    case BackendKind::Multiset:
        for (std::size_t x = 0; x < t.weights.size(); ++x)
            s += (x ? " " : "") + std::to_string(x) + ":" + std::to_string(t.weights[x]);
        return "[" + s + "]";
    case BackendKind::Distribution:
        for (std::size_t x = 0; x < t.numerators.size(); ++x)
            s += (x ? " " : "") + std::to_string(x) + ":" + mpq_class(t.numerators[x], t.denominator).get_str();
        return "[" + s + "]";
    case BackendKind::Game:
        for (std::size_t k = 0; k < t.outcomes.size(); ++k)
            s += (k ? " " : "") + std::to_string(t.outcomes[k]);
        return "outcomes[" + s + "]";
    }
    return s;
}

void addDenominators(FunctorBackend& fb, const mpz_class& lcm)
{
    if (lcm > 1 && lcm <= 1000) {
        long l = lcm.get_si();
        for (long k = 1; k <= 3; ++k)
            fb.extraDenominators.push_back(static_cast<int>(l * k));
    }
}

} // namespace

OneStepReport oneStepSound(const RuleCode& code, const FunctorBackend& backend, int maxCarrier)
{
    OneStepReport rep;
    const std::size_t arity = code.arity();
    if (arity >= 20)
        throw std::length_error("rule arity too large for the oracle");
    if (maxCarrier > 6)
        throw std::length_error("carrier bound too large for the oracle");
    FunctorBackend fb = backend;
    mpz_class lcm = 1;
    for (const auto& op : code.operators)
        if (op.kind == OpKind::Prob)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), op.prob.get_den_mpz_t());
    addDenominators(fb, lcm);

    Premise prem = premiseOf(code);
    std::vector<std::uint64_t> admissible;
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << arity); ++v)
        if (premiseHolds(prem, v))
            admissible.push_back(v);

    std::vector<ModalOperator> ops;
    std::vector<std::size_t> opOf(arity);
    for (std::size_t i = 0; i < arity; ++i) {
        auto it = std::find(ops.begin(), ops.end(), code.operators[i]);
        opOf[i] = static_cast<std::size_t>(it - ops.begin());
        if (it == ops.end())
            ops.push_back(code.operators[i]);
    }

    for (int n = 0; n <= maxCarrier; ++n) {
        // each element only matters through the truth of op(A) for every A subset of X
        std::map<std::vector<std::uint64_t>, FunctorElement> signatures;
        const std::uint64_t subsets = std::uint64_t(1) << n;
        forEachElement(fb, n, {}, [&](const FunctorElement& t) {
            ++rep.elements;
            std::vector<std::uint64_t> sig(ops.size(), 0);
            for (std::size_t o = 0; o < ops.size(); ++o)
                for (std::uint64_t a = 0; a < subsets; ++a)
                    if (liftedTruth(fb, t, ops[o], a))
                        sig[o] |= std::uint64_t(1) << a;
            signatures.emplace(std::move(sig), t);
            return true;
        });
        if (signatures.empty())
            continue;
        if (n > 0 && admissible.empty())
            continue;
        // tau as a nondecreasing tuple of admissible variable vectors, one per element of X
        std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
        for (;;) {
            ++rep.valuations;
            std::vector<std::uint64_t> A(arity, 0);
            for (int x = 0; x < n; ++x) {
                std::uint64_t v = admissible[pick[static_cast<std::size_t>(x)]];
                for (std::size_t i = 0; i < arity; ++i)
                    if ((v >> i) & 1)
                        A[i] |= std::uint64_t(1) << x;
            }
            for (const auto& [sig, t] : signatures) {
                bool holds = false;
                for (std::size_t i = 0; i < arity && !holds; ++i)
                    holds = (((sig[opOf[i]] >> A[i]) & 1) != 0) == code.signs[i];
                if (!holds) {
                    rep.sound = false;
                    std::string tau;
                    for (std::size_t i = 0; i < arity; ++i)
                        tau += (i ? ", " : "") + std::string("a") + std::to_string(i + 1) + "=" + maskString(A[i], n);
                    rep.counterexample = code.toString() + " fails on |X|=" + std::to_string(n) + " with " + tau +
                                         " at " + describe(fb, t, n);
                    return rep;
                }
            }
            int x = n - 1;
            while (x >= 0 && pick[static_cast<std::size_t>(x)] + 1 == admissible.size())
                --x;
            if (x < 0)
                break;
            std::size_t next = pick[static_cast<std::size_t>(x)] + 1;
            for (int y = x; y < n; ++y)
                pick[static_cast<std::size_t>(y)] = next;
        }
    }
    return rep;
}

namespace {

class BruteForce {
public:
    explicit BruteForce(const LogicConfig& cfg) : cfg_(cfg), fb_(backendFor(cfg))
    {
        mw_.kind = frameFor(cfg.logic);
        mw_.upwardClosed = cfg.logic == Logic::M;
        mw_.agents = cfg.logic == Logic::Coal ? cfg.agents : 0;
    }

    std::optional<int> sat(Formula f)
    {
        auto it = memo_.find(f);
        if (it != memo_.end())
            return it->second;
        ++stats.formulas;
        std::optional<int> r = search(f);
        memo_[f] = r;
        return r;
    }

    ModelWitness model(int root) const
    {
        ModelWitness m = mw_;
        m.root = root;
        return m;
    }

    BruteForceStats stats;

private:
    bool needsSink() const
    {
        return cfg_.logic == Logic::KD || cfg_.logic == Logic::PML || cfg_.logic == Logic::Coal;
    }

    int sink()
    {
        if (sink_ >= 0)
            return sink_;
        sink_ = static_cast<int>(mw_.states.size());
        WitnessState st;
        if (cfg_.logic == Logic::KD)
            st.successors = {sink_};
        if (cfg_.logic == Logic::PML)
            st.probabilities = {{sink_, mpq_class(1)}};
        if (cfg_.logic == Logic::Coal) {
            st.game.strategies.assign(static_cast<std::size_t>(cfg_.agents), 1);
            st.game.outcomes = {sink_};
        }
        mw_.states.push_back(std::move(st));
        return sink_;
    }

    std::optional<int> search(Formula f)
    {
        std::vector<Formula> atoms = modalAtoms(f);
        std::vector<Formula> props, modals;
        for (Formula a : atoms)
            (isAtom(a) ? props : modals).push_back(a);
        std::vector<Literal> lits;
        for (Formula a : modals)
            lits.push_back({a, true});
        std::vector<Formula> args = patternArguments(lits);
        if (args.size() > 16)
            throw std::length_error("too many modal arguments for the oracle");

        std::vector<int> X;
        std::vector<std::uint64_t> types;
        if (!args.empty())
            for (std::uint64_t p = 0; p < (std::uint64_t(1) << args.size()); ++p)
                if (auto c = sat(patternFormula(args, p))) {
                    X.push_back(*c);
                    types.push_back(p);
                }
        if (X.empty() && needsSink()) {
            int s = sink();
            std::uint64_t type = 0;
            for (std::size_t j = 0; j < args.size(); ++j)
                if (modelCheck(model(s), s, args[j]))
                    type |= std::uint64_t(1) << j;
            X.push_back(s);
            types.push_back(type);
        }
        const int n = static_cast<int>(X.size());
        std::vector<std::uint64_t> truthSet(args.size(), 0);
        for (std::size_t j = 0; j < args.size(); ++j)
            for (int x = 0; x < n; ++x)
                if ((types[static_cast<std::size_t>(x)] >> j) & 1)
                    truthSet[j] |= std::uint64_t(1) << x;
        std::vector<std::size_t> argOf;
        for (Formula a : modals)
            argOf.push_back(static_cast<std::size_t>(std::find(args.begin(), args.end(), a->lhs) - args.begin()));

        FunctorBackend fb = fb_;
        IndexProfile prof = indexProfile(f);
        fb.maxMultiplicity = std::max<long>(fb.maxMultiplicity, 2 * (static_cast<long>(prof.maxGrade) + 1) + 1);
        addDenominators(fb, prof.denominatorLcm);

        AtomIndex index(atoms);
        std::set<std::vector<bool>> seen;
        std::optional<FunctorElement> found;
        std::uint64_t foundProps = 0;
        forEachElement(fb, n, truthSet, [&](const FunctorElement& t) {
            ++stats.elements;
            std::vector<bool> sig;
            for (std::size_t m = 0; m < modals.size(); ++m)
                sig.push_back(liftedTruth(fb, t, modals[m]->op, truthSet[argOf[m]]));
            if (!seen.insert(sig).second)
                return true;
            std::vector<signed char> values(atoms.size(), 0);
            for (std::size_t m = 0; m < modals.size(); ++m)
                values[static_cast<std::size_t>(index.indexOf(modals[m]))] = sig[m] ? 1 : 0;
            for (std::uint64_t pm = 0; pm < (std::uint64_t(1) << props.size()); ++pm) {
                for (std::size_t q = 0; q < props.size(); ++q)
                    values[static_cast<std::size_t>(index.indexOf(props[q]))] = ((pm >> q) & 1) ? 1 : 0;
                if (evaluate3(f, index, values) == 1) {
                    found = t;
                    foundProps = pm;
                    return false;
                }
            }
            return true;
        });
        if (!found)
            return std::nullopt;

        WitnessState st;
        for (std::size_t q = 0; q < props.size(); ++q)
            if ((foundProps >> q) & 1)
                st.atoms.push_back(props[q]->op.name);
        std::sort(st.atoms.begin(), st.atoms.end());
        fill(st, fb, *found, X);
        mw_.states.push_back(std::move(st));
        return static_cast<int>(mw_.states.size()) - 1;
    }

    void fill(WitnessState& st, const FunctorBackend& fb, const FunctorElement& t, const std::vector<int>& X)
    {
        auto members = [&](std::uint64_t mask) {
            std::vector<int> out;
            for (std::size_t x = 0; x < X.size(); ++x)
                if ((mask >> x) & 1)
                    out.push_back(X[x]);
            std::sort(out.begin(), out.end());
            return out;
        };
        switch (fb.kind) {
        case BackendKind::Powerset:
        case BackendKind::NonemptyPowerset:
            st.successors = members(t.subset);
            break;
        case BackendKind::Neighbourhood:
        case BackendKind::UpwardNeighbourhood:
            st.support = X;
            std::sort(st.support.begin(), st.support.end());
            for (std::uint64_t m : t.family)
                st.neighbourhoods.push_back(members(m));
            break;
        case BackendKind::Multiset:
            for (std::size_t x = 0; x < X.size(); ++x)
                if (t.weights[x] > 0)
                    st.weights.emplace_back(X[x], mpz_class(t.weights[x]));
            break;
        case BackendKind::Distribution:
            for (std::size_t x = 0; x < X.size(); ++x)
                if (t.numerators[x] > 0)
                    st.probabilities.emplace_back(X[x], mpq_class(t.numerators[x], t.denominator));
            for (auto& [s, p] : st.probabilities)
                p.canonicalize();
            break;
        case BackendKind::Game:
            st.game.strategies.assign(static_cast<std::size_t>(fb.agents), fb.strategies);
            for (int o : t.outcomes)
                st.game.outcomes.push_back(X[static_cast<std::size_t>(o)]);
            break;
        }
    }

    LogicConfig cfg_;
    FunctorBackend fb_;
    ModelWitness mw_;
    std::unordered_map<Formula, std::optional<int>> memo_;
    int sink_ = -1;
};

} // namespace

std::optional<ModelWitness> bruteForceSat(Formula f, const LogicConfig& cfg, BruteForceStats* stats)
{
    BruteForce bf(cfg);
    std::optional<int> root = bf.sat(f);
    if (stats)
        *stats = bf.stats;
    if (!root)
        return std::nullopt;
    return bf.model(*root);
}

Formula substitute(Formula f, const std::map<Formula, Formula>& sigma)
{
    std::unordered_map<Formula, Formula> memo;
    std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
        auto s = sigma.find(g);
        if (s != sigma.end())
            return s->second;
        auto it = memo.find(g);
        if (it != memo.end())
            return it->second;
        Formula r = g;
        switch (g->kind) {
        case NodeKind::Bottom:
            break;
        case NodeKind::Not:
            r = neg(go(g->lhs));
            break;
        case NodeKind::And:
            r = conj(go(g->lhs), go(g->rhs));
            break;
        case NodeKind::Modal:
            if (g->lhs)
                r = modal(g->op, go(g->lhs));
            break;
        }
        memo[g] = r;
        return r;
    };
    return go(f);
}

RuleInstance instanceOf(const RuleCode& code, const std::string& prefix)
{
    std::vector<Formula> sigma;
    for (std::size_t i = 0; i < code.arity(); ++i)
        sigma.push_back(atom(prefix + std::to_string(i + 1)));
    RuleInstance inst;
    std::vector<Formula> clauses;
    for (const VarClause& g : premiseCnfClauses(premiseOf(code)))
        clauses.push_back(instantiatedClause(g, sigma));
    inst.premise = conjAll(clauses);
    for (std::size_t i = 0; i < code.arity(); ++i)
        inst.conclusion.push_back({modal(code.operators[i], sigma[i]), static_cast<bool>(code.signs[i])});
    return inst;
}

namespace {

std::set<Formula> variablesOf(const RuleInstance& r)
{
    std::set<Formula> vs;
    for (Formula a : modalAtoms(r.premise))
        vs.insert(a);
    for (const auto& l : r.conclusion)
        vs.insert(l.atom->lhs);
    return vs;
}

// Sign patterns J over the literals of rho (bit i: argument of literal i true) that are
// consistent with the premise.
std::vector<std::uint64_t> premisePatterns(Formula premise, const Clause& rho)
{
    std::vector<Formula> vars;
    for (Formula a : modalAtoms(premise))
        vars.push_back(a);
    for (const auto& l : rho)
        if (std::find(vars.begin(), vars.end(), l.atom->lhs) == vars.end())
            vars.push_back(l.atom->lhs);
    if (vars.size() > 20)
        throw std::length_error("too many variables");
    AtomIndex index(vars);
    std::set<std::uint64_t> out;
    std::vector<signed char> values(vars.size());
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << vars.size()); ++v) {
        for (std::size_t k = 0; k < vars.size(); ++k)
            values[k] = ((v >> k) & 1) ? 1 : 0;
        if (evaluate3(premise, index, values) != 1)
            continue;
        std::uint64_t J = 0;
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (values[static_cast<std::size_t>(index.indexOf(rho[i].atom->lhs))] == 1)
                J |= std::uint64_t(1) << i;
        out.insert(J);
    }
    return {out.begin(), out.end()};
}

Formula instantiatedPremise(const RuleMatching& m)
{
    std::vector<Formula> clauses;
    for (const VarClause& g : premiseCnfClauses(premiseOf(m.code)))
        clauses.push_back(instantiatedClause(g, m.substitution));
    return conjAll(clauses);
}

} // namespace

RuleInstance resolveRules(const RuleInstance& r1, std::size_t i, const RuleInstance& r2, std::size_t j)
{
    if (i >= r1.conclusion.size() || j >= r2.conclusion.size())
        throw ResolutionError("literal index out of range");
    const Literal& l1 = r1.conclusion[i];
    const Literal& l2 = r2.conclusion[j];
    if (!l1.positive || l2.positive)
        throw ResolutionError("resolution needs a positive literal in the first rule and a negative one in the second");
    if (l1.atom->op != l2.atom->op)
        throw ResolutionError("resolved literals carry different operators");
    std::set<Formula> v1 = variablesOf(r1), v2 = variablesOf(r2);
    for (Formula v : v1)
        if (v2.count(v))
            throw ResolutionError("rules share variable " + toString(v) + "; rename first");
    Formula a = l1.atom->lhs, b = l2.atom->lhs;
    Formula joint = conj(r1.premise, substitute(r2.premise, {{b, a}}));
    RuleInstance out;
    out.premise = disj(substitute(joint, {{a, top()}}), substitute(joint, {{a, bottom()}}));
    for (std::size_t k = 0; k < r1.conclusion.size(); ++k)
        if (k != i)
            out.conclusion.push_back(r1.conclusion[k]);
    for (std::size_t k = 0; k < r2.conclusion.size(); ++k)
        if (k != j)
            out.conclusion.push_back(r2.conclusion[k]);
    return out;
}

std::optional<RuleMatching> subsumingMatching(const RuleInstance& inst, const LogicConfig& cfg)
{
    const std::size_t n = inst.conclusion.size();
    if (n == 0 || n > 12)
        return std::nullopt;
    for (std::uint64_t mask = (std::uint64_t(1) << n) - 1; mask > 0; --mask) {
        Clause rho;
        for (std::size_t k = 0; k < n; ++k)
            if ((mask >> k) & 1)
                rho.push_back(inst.conclusion[k]);
        std::vector<RuleMatching> candidates = cfg.arithmetic() ? congruenceMatchings(rho, cfg.logic) : matchings(rho, cfg);
        for (const RuleMatching& m : candidates)
            if (propEntails(inst.premise, instantiatedPremise(m), cfg.truthTableLimit))
                return m;
        if (cfg.arithmetic()) {
            MatchingSearch s = refutingMatchingExists(rho, premisePatterns(inst.premise, rho), cfg);
            if (s.matching)
                return s.matching;
        }
    }
    return std::nullopt;
}

RuleCode sumCode(const RuleCode& c1, std::size_t i, const RuleCode& c2, std::size_t j)
{
    if (!isArithmetic(c1.scheme) || c1.scheme != c2.scheme || i >= c1.arity() || j >= c2.arity())
        throw ResolutionError("sum codes need two arithmetic codes of one scheme");
    const mpz_class& r = c1.coeffs[i];
    const mpz_class& s = c2.coeffs[j];
    if (r <= 0 || s >= 0 || c1.operators[i] != c2.operators[j])
        throw ResolutionError("literals do not cancel");
    mpz_class g;
    mpz_class as = -s;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), as.get_mpz_t());
    mpz_class l1 = as / g, l2 = r / g;
    RuleCode out;
    out.logic = c1.logic;
    out.scheme = c1.scheme;
    auto take = [&](const RuleCode& c, std::size_t skip, const mpz_class& lambda) {
        for (std::size_t k = 0; k < c.arity(); ++k) {
            if (k == skip)
                continue;
            out.signs.push_back(c.signs[k]);
            out.operators.push_back(c.operators[k]);
            out.coeffs.push_back(lambda * c.coeffs[k]);
        }
    };
    take(c1, i, l1);
    take(c2, j, l2);
    out.bound = l1 * c1.bound + l2 * c2.bound;
    return out;
}

ClosureReport resolutionClosure(const RuleCode& c1, std::size_t i, const RuleCode& c2, std::size_t j, const LogicConfig& cfg)
{
    ClosureReport rep;
    RuleInstance r1 = instanceOf(c1, "x"), r2 = instanceOf(c2, "y");
    RuleInstance res = resolveRules(r1, i, r2, j);
    if (res.conclusion.empty()) {
        rep.subsumed = !propSatisfiable(res.premise, cfg.truthTableLimit);
        rep.detail = rep.subsumed ? "empty resolvent with contradictory premise" : "empty resolvent with satisfiable premise";
        // the summed premise 0 >= k is contradictory exactly when k > 0
        if (isArithmetic(c1.scheme) && isArithmetic(c2.scheme))
            rep.sumCodeAdmissible = sumCode(c1, i, c2, j).bound > 0;
        return rep;
    }
    if (auto m = subsumingMatching(res, cfg)) {
        rep.subsumed = true;
        rep.detail = "subsumed by " + m->code.toString();
    } else {
        rep.detail = "resolvent not subsumed: " + toString(res.conclusion) + " from " + toString(res.premise);
    }
    if (isArithmetic(c1.scheme) && isArithmetic(c2.scheme)) {
        RuleCode sum = sumCode(c1, i, c2, j);
        if (sideCondition(sum, cfg)) {
            RuleMatching m{sum, {}};
            for (const auto& l : res.conclusion)
                m.substitution.push_back(l.atom->lhs);
            rep.sumCodeAdmissible = propEntails(res.premise, instantiatedPremise(m), cfg.truthTableLimit);
        }
    }
    return rep;
}

std::optional<RuleMatching> strictCompletenessProbe(const FunctorBackend& fb, int n, const std::map<Formula, std::uint64_t>& tau,
                                                    const Clause& chi, const LogicConfig& cfg)
{
    auto valueOf = [&](Formula arg) {
        auto it = tau.find(arg);
        if (it == tau.end())
            throw std::invalid_argument("valuation misses " + toString(arg));
        return it->second;
    };
    forEachElement(fb, n, {}, [&](const FunctorElement& t) {
        bool holds = std::any_of(chi.begin(), chi.end(), [&](const Literal& l) {
            return liftedTruth(fb, t, l.atom->op, valueOf(l.atom->lhs)) == l.positive;
        });
        if (!holds)
            throw std::invalid_argument("clause is not valid over the given carrier and valuation");
        return true;
    });
    const std::size_t k = chi.size();
    if (k == 0 || k > 12)
        return std::nullopt;
    for (std::uint64_t mask = (std::uint64_t(1) << k) - 1; mask > 0; --mask) {
        Clause rho;
        for (std::size_t q = 0; q < k; ++q)
            if ((mask >> q) & 1)
                rho.push_back(chi[q]);
        std::vector<RuleMatching> candidates = cfg.arithmetic() ? congruenceMatchings(rho, cfg.logic) : matchings(rho, cfg);
        for (const RuleMatching& m : candidates) {
            bool premiseHoldsOverX = true;
            for (const VarClause& g : premiseCnfClauses(premiseOf(m.code))) {
                for (int x = 0; x < n && premiseHoldsOverX; ++x)
                    premiseHoldsOverX = std::any_of(g.begin(), g.end(), [&](const VarLiteral& l) {
                        return (((valueOf(m.substitution[static_cast<std::size_t>(l.var)]) >> x) & 1) != 0) == l.positive;
                    });
                if (!premiseHoldsOverX)
                    break;
            }
            if (premiseHoldsOverX)
                return m;
        }
        if (cfg.arithmetic()) {
            std::set<std::uint64_t> js;
            for (int x = 0; x < n; ++x) {
                std::uint64_t J = 0;
                for (std::size_t q = 0; q < rho.size(); ++q)
                    if ((valueOf(rho[q].atom->lhs) >> x) & 1)
                        J |= std::uint64_t(1) << q;
                js.insert(J);
            }
            MatchingSearch s = refutingMatchingExists(rho, {js.begin(), js.end()}, cfg);
            if (s.matching)
                return s.matching;
        }
    }
    return std::nullopt;
}

} // namespace cmlsat

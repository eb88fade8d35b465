#include "cmlsat/onestep.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmlsat {

std::string schemeName(Scheme s)
{
    switch (s) {
    case Scheme::Congruence:
        return "congruence";
    case Scheme::Monotone:
        return "monotone";
    case Scheme::KRule:
        return "K";
    case Scheme::KDRule:
        return "KD";
    case Scheme::Coal1:
        return "coal-1";
    case Scheme::Coal4:
        return "coal-4";
    case Scheme::Graded:
        return "G";
    case Scheme::Majority:
        return "M";
    case Scheme::Prob:
        return "P";
    }
    return "?";
}

Scheme schemeFromName(const std::string& name)
{
    for (Scheme s : {Scheme::Congruence, Scheme::Monotone, Scheme::KRule, Scheme::KDRule, Scheme::Coal1, Scheme::Coal4,
                     Scheme::Graded, Scheme::Majority, Scheme::Prob})
        if (schemeName(s) == name)
            return s;
    throw std::invalid_argument("unknown rule scheme '" + name + "'");
}

bool isArithmetic(Scheme s) { return s == Scheme::Graded || s == Scheme::Majority || s == Scheme::Prob; }

bool RuleCode::operator==(const RuleCode& o) const
{
    return logic == o.logic && scheme == o.scheme && signs == o.signs && operators == o.operators && coeffs == o.coeffs &&
           bound == o.bound;
}

std::string RuleCode::toString() const
{
    std::string s = schemeName(scheme) + "(";
    for (std::size_t i = 0; i < arity(); ++i) {
        if (i)
            s += ", ";
        if (!coeffs.empty())
            s += coeffs[i].get_str() + "*";
        s += signs[i] ? "" : "~";
        s += operatorString(operators[i]) + " a" + std::to_string(i + 1);
    }
    if (isArithmetic(scheme))
        s += "; " + bound.get_str();
    return s + ")";
}

Premise premiseOf(const RuleCode& code)
{
    const std::size_t n = code.arity();
    if (isArithmetic(code.scheme))
        return LinearPremise{code.coeffs, code.bound};
    ClausePremise p;
    if (code.scheme == Scheme::Congruence) {
        // literal 0 is the negative one: a0 <-> a1
        p.clauses.push_back({{0, false}, {1, true}});
        p.clauses.push_back({{1, false}, {0, true}});
        return p;
    }
    // The remaining shape schemes have the conclusion's mirror image as their premise.
    VarClause mirror;
    for (std::size_t i = 0; i < n; ++i)
        mirror.push_back({static_cast<int>(i), code.signs[i]});
    p.clauses.push_back(std::move(mirror));
    return p;
}

std::size_t premiseVariables(const Premise& p)
{
    if (auto lp = std::get_if<LinearPremise>(&p))
        return lp->coeffs.size();
    std::size_t n = 0;
    for (const auto& c : std::get<ClausePremise>(p).clauses)
        for (const auto& l : c)
            n = std::max(n, static_cast<std::size_t>(l.var + 1));
    return n;
}

mpz_class linearSum(const std::vector<mpz_class>& coeffs, std::uint64_t J)
{
    mpz_class s = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (J & (std::uint64_t(1) << i))
            s += coeffs[i];
    return s;
}

bool premiseHolds(const Premise& p, std::uint64_t valuation)
{
    if (auto lp = std::get_if<LinearPremise>(&p))
        return linearSum(lp->coeffs, valuation) >= lp->bound;
    for (const auto& c : std::get<ClausePremise>(p).clauses) {
        bool sat = false;
        for (const auto& l : c)
            if ((((valuation >> l.var) & 1) != 0) == l.positive)
                sat = true;
        if (!sat)
            return false;
    }
    return true;
}

VarClause linearClause(std::uint64_t J, std::size_t n)
{
    VarClause c;
    for (std::size_t j = 0; j < n; ++j)
        c.push_back({static_cast<int>(j), (J & (std::uint64_t(1) << j)) == 0});
    return c;
}

std::optional<std::uint64_t> linearClauseIndex(const VarClause& c, std::size_t n)
{
    if (c.size() != n)
        return std::nullopt;
    std::uint64_t J = 0, seen = 0;
    for (const auto& l : c) {
        if (l.var < 0 || static_cast<std::size_t>(l.var) >= n)
            return std::nullopt;
        std::uint64_t bit = std::uint64_t(1) << l.var;
        if (seen & bit)
            return std::nullopt;
        seen |= bit;
        if (!l.positive)
            J |= bit;
    }
    return J;
}

PremiseClauseEnumerator::PremiseClauseEnumerator(Premise p) : premise_(std::move(p)) {}

std::optional<VarClause> PremiseClauseEnumerator::next()
{
    if (auto cp = std::get_if<ClausePremise>(&premise_)) {
        if (cursor_ >= cp->clauses.size())
            return std::nullopt;
        return cp->clauses[cursor_++];
    }
    const auto& lp = std::get<LinearPremise>(premise_);
    const std::size_t n = lp.coeffs.size();
    const std::uint64_t end = std::uint64_t(1) << n;
    while (cursor_ < end) {
        std::uint64_t J = cursor_++;
        if (linearSum(lp.coeffs, J) < lp.bound)
            return linearClause(J, n);
    }
    return std::nullopt;
}

std::vector<VarClause> premiseCnfClauses(const Premise& p)
{
    std::vector<VarClause> out;
    PremiseClauseEnumerator e(p);
    while (auto c = e.next())
        out.push_back(std::move(*c));
    return out;
}

bool premiseHasClause(const Premise& p, const VarClause& c)
{
    if (auto lp = std::get_if<LinearPremise>(&p)) {
        auto J = linearClauseIndex(c, lp->coeffs.size());
        return J && linearSum(lp->coeffs, *J) < lp->bound;
    }
    for (const auto& d : std::get<ClausePremise>(p).clauses) {
        if (d.size() != c.size())
            continue;
        bool same = std::all_of(c.begin(), c.end(), [&](const VarLiteral& l) { return std::find(d.begin(), d.end(), l) != d.end(); });
        if (same)
            return true;
    }
    return false;
}

Clause RuleMatching::conclusion() const
{
    Clause c;
    for (std::size_t i = 0; i < code.arity(); ++i)
        c.push_back({modal(code.operators[i], substitution[i]), code.signs[i]});
    return c;
}

Formula negatedClauseInstance(const VarClause& gamma, const std::vector<Formula>& sigma)
{
    const Formula bot = bottom(), tt = top();
    std::vector<Formula> parts;
    for (const auto& l : gamma) {
        Formula x = sigma.at(static_cast<std::size_t>(l.var));
        Formula part = l.positive ? negate(x) : x;
        if (part == bot)
            return bot;
        if (part == tt)
            continue;
        if (std::find(parts.begin(), parts.end(), part) == parts.end())
            parts.push_back(part);
    }
    return conjAll(parts);
}

Formula instantiatedClause(const VarClause& gamma, const std::vector<Formula>& sigma)
{
    std::vector<Formula> parts;
    for (const auto& l : gamma) {
        Formula x = sigma.at(static_cast<std::size_t>(l.var));
        parts.push_back(l.positive ? x : neg(x));
    }
    return disjAll(parts);
}

bool isContractedInstance(const RuleMatching& m)
{
    Clause c = m.conclusion();
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (c[i] == c[j])
                return false;
    return true;
}

std::vector<RuleMatching> congruenceMatchings(const Clause& rho, Logic logic)
{
    std::vector<RuleMatching> out;
    if (rho.size() != 2)
        return out;
    const Literal* negLit = nullptr;
    const Literal* posLit = nullptr;
    for (const auto& l : rho)
        (l.positive ? posLit : negLit) = &l;
    if (!negLit || !posLit || isAtom(negLit->atom) || isAtom(posLit->atom))
        return out;
    if (negLit->atom->op != posLit->atom->op)
        return out;
    RuleMatching m;
    m.code.logic = logic;
    m.code.scheme = Scheme::Congruence;
    m.code.signs = {false, true};
    m.code.operators = {negLit->atom->op, posLit->atom->op};
    m.substitution = {negLit->atom->lhs, posLit->atom->lhs};
    out.push_back(std::move(m));
    return out;
}

std::string toString(const VarClause& c)
{
    if (c.empty())
        return "false";
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            s += " | ";
        s += (c[i].positive ? "a" : "~a") + std::to_string(c[i].var + 1);
    }
    return s;
}

} // namespace cmlsat

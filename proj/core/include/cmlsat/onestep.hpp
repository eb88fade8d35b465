#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"

namespace cmlsat {

enum class Scheme {
    Congruence,  // a <-> b / La -> Lb
    Monotone,    // a -> b / []a -> []b
    KRule,       // a1 & .. & an -> b / []a1 & .. & []an -> []b
    KDRule,      // ~(a1 & .. & an) / ~([]a1 & .. & []an), n >= 1
    Coal1,       // ~(a1 & .. & an) / ~([C1]a1 & .. & [Cn]an), Ci pairwise disjoint
    Coal4,       // a1&..&an -> b | c1|..|cm / [C1]a1&..&[Cn]an -> [D]b | [N]c1 | .. | [N]cm
    Graded,      // contracted graded rule, premise sum r_i a_i >= 0
    Majority,    // contracted majority rule, premise sum r_i a_i + sum s_j b_j >= m
    Prob,        // contracted probabilistic rule, premise sum r_i a_i >= k
};

std::string schemeName(Scheme s);
Scheme schemeFromName(const std::string& name);  // throws std::invalid_argument
bool isArithmetic(Scheme s);

// Canonical rule code: literal i of the conclusion is signs[i] * operators[i](a_i), with
// variable a_i distinct for every literal. Arithmetic schemes carry one coefficient per
// literal and a bound (k, m or u).
struct RuleCode {
    Logic logic = Logic::K;
    Scheme scheme = Scheme::KRule;
    std::vector<bool> signs;
    std::vector<ModalOperator> operators;
    std::vector<mpz_class> coeffs;
    mpz_class bound;

    std::size_t arity() const { return signs.size(); }
    bool operator==(const RuleCode& o) const;
    std::string toString() const;
};

struct VarLiteral {
    int var;
    bool positive;
    bool operator==(const VarLiteral& o) const { return var == o.var && positive == o.positive; }
};
using VarClause = std::vector<VarLiteral>;

struct ClausePremise {
    std::vector<VarClause> clauses;
};

// sum coeffs[i] * a_i >= bound, read pointwise over characteristic functions.
struct LinearPremise {
    std::vector<mpz_class> coeffs;
    mpz_class bound;
};

using Premise = std::variant<ClausePremise, LinearPremise>;

Premise premiseOf(const RuleCode& code);
std::size_t premiseVariables(const Premise& p);

// Truth of the premise under a 0/1 valuation (bit i = value of a_i).
bool premiseHolds(const Premise& p, std::uint64_t valuation);

// Clause of a linear premise indexed by J: OR_{j in J} ~a_j  |  OR_{j not in J} a_j.
VarClause linearClause(std::uint64_t J, std::size_t n);
// Inverse of linearClause for clauses mentioning every variable exactly once.
std::optional<std::uint64_t> linearClauseIndex(const VarClause& c, std::size_t n);
mpz_class linearSum(const std::vector<mpz_class>& coeffs, std::uint64_t J);

// Lazy CNF enumeration of a premise; linear premises yield clauses in subset-rank order.
class PremiseClauseEnumerator {
public:
    explicit PremiseClauseEnumerator(Premise p);
    std::optional<VarClause> next();

private:
    Premise premise_;
    std::uint64_t cursor_ = 0;
};

std::vector<VarClause> premiseCnfClauses(const Premise& p);
bool premiseHasClause(const Premise& p, const VarClause& c);

struct RuleMatching {
    RuleCode code;
    std::vector<Formula> substitution;  // a_i -> argument of literal i

    Clause conclusion() const;
    bool operator==(const RuleMatching& o) const { return code == o.code && substitution == o.substitution; }
};

// The formula ~(gamma sigma), with constants folded; gamma a premise clause.
Formula negatedClauseInstance(const VarClause& gamma, const std::vector<Formula>& sigma);
// gamma sigma as a disjunction (no folding); used as goals in proofs.
Formula instantiatedClause(const VarClause& gamma, const std::vector<Formula>& sigma);

bool isContractedInstance(const RuleMatching& m);

// Matchings of rho = ~L phi | L psi against the congruence rule.
std::vector<RuleMatching> congruenceMatchings(const Clause& rho, Logic logic);

std::string toString(const VarClause& c);

} // namespace cmlsat

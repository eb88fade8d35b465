#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"
#include "cmlsat/models.hpp"
#include "cmlsat/onestep.hpp"

namespace cmlsat {

enum class BackendKind { Powerset, NonemptyPowerset, Neighbourhood, UpwardNeighbourhood, Multiset, Distribution, Game };

// A finite enumeration of T X for small carriers X = {0, .., n-1}.
struct FunctorBackend {
    BackendKind kind = BackendKind::Powerset;
    int maxMultiplicity = 4;
    int maxDenominator = 12;
    std::vector<int> extraDenominators;  // added to 1..maxDenominator
    int agents = 2;
    int strategies = 2;
    long elementCap = 5'000'000;
};

std::string backendName(BackendKind k);
FunctorBackend backendFor(const LogicConfig& cfg);

// One element of T X. Only the fields of the backend's kind are used; subsets of X are bitmasks.
struct FunctorElement {
    std::uint64_t subset = 0;
    std::vector<std::uint64_t> family;
    std::vector<long> weights;
    std::vector<long> numerators;
    long denominator = 1;
    std::vector<int> outcomes;  // profile -> element of X, agent 1 fastest
};

// Visits every element of T X for |X| = n. Neighbourhood backends only range over families of
// sets drawn from `relevant` (all subsets when empty). Stops early when visit returns false.
// Throws std::length_error when the enumeration exceeds fb.elementCap.
void forEachElement(const FunctorBackend& fb, int n, const std::vector<std::uint64_t>& relevant,
                    const std::function<bool(const FunctorElement&)>& visit);

// Truth of op(A) at t for A = mask under the predicate lifting of op.
bool liftedTruth(const FunctorBackend& fb, const FunctorElement& t, const ModalOperator& op, std::uint64_t mask);

struct OneStepReport {
    bool sound = true;
    std::string counterexample;
    std::size_t valuations = 0;
    std::size_t elements = 0;
};

// Checks T X, tau |= conclusion for every |X| <= maxCarrier and every tau with X, tau |= premise.
OneStepReport oneStepSound(const RuleCode& code, const FunctorBackend& fb, int maxCarrier);

struct BruteForceStats {
    std::size_t formulas = 0;
    std::size_t elements = 0;
};

// Bounded search for a model of f built from models of the satisfiable sign patterns of its
// modal arguments, one state per pattern. Absence is conclusive only within the bounds.
std::optional<ModelWitness> bruteForceSat(Formula f, const LogicConfig& cfg, BruteForceStats* stats = nullptr);

// A rule instance over propositional variables: premise formula and conclusion clause whose
// literals are operators applied to distinct variables.
struct RuleInstance {
    Formula premise = nullptr;
    Clause conclusion;
};

// The code instantiated with fresh variables prefix1, prefix2, ...
RuleInstance instanceOf(const RuleCode& code, const std::string& prefix);

class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Resolvent at literal i of r1 (positive) and literal j of r2 (negative, same operator). The
// variable of r2's literal is identified with r1's and then eliminated from the premise.
RuleInstance resolveRules(const RuleInstance& r1, std::size_t i, const RuleInstance& r2, std::size_t j);

// Is the instance subsumed by a rule of the logic: a matching of its conclusion whose
// instantiated premise is entailed by the instance premise?
std::optional<RuleMatching> subsumingMatching(const RuleInstance& inst, const LogicConfig& cfg);

// Linear combination of two arithmetic codes cancelling literal i of c1 against literal j of c2.
RuleCode sumCode(const RuleCode& c1, std::size_t i, const RuleCode& c2, std::size_t j);

struct ClosureReport {
    bool subsumed = false;
    bool sumCodeAdmissible = false;
    std::string detail;
};

ClosureReport resolutionClosure(const RuleCode& c1, std::size_t i, const RuleCode& c2, std::size_t j, const LogicConfig& cfg);

// Given X = {0..n-1}, a valuation of variable atoms and a clause chi over operators applied to
// those atoms with T X, tau |= chi, looks for a matching of a subclause whose premise holds
// over X, tau. Returns nullopt for a completeness gap at these bounds; throws
// std::invalid_argument when chi is not valid over X, tau.
std::optional<RuleMatching> strictCompletenessProbe(const FunctorBackend& fb, int n, const std::map<Formula, std::uint64_t>& tau,
                                                    const Clause& chi, const LogicConfig& cfg);

// Uniform substitution of formulas for modal atoms (typically propositional variables).
Formula substitute(Formula f, const std::map<Formula, Formula>& sigma);

} // namespace cmlsat

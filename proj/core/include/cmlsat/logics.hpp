#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"
#include "cmlsat/onestep.hpp"

namespace cmlsat {

// Rule matchings of a contracted clause that are found by shape: the congruence rule plus
// the K, KD, monotone and coalition schemes. Arithmetic schemes are handled by
// refutingMatchingExists. Clauses containing atom literals have no modal matchings.
std::vector<RuleMatching> matchings(const Clause& rho, const LogicConfig& cfg);

// Structural well-formedness plus the scheme's side condition, in exact arithmetic.
bool sideCondition(const RuleCode& code, const LogicConfig& cfg);

// Which sign patterns over distinct argument formulas are satisfiable.
// Bit j of a pattern is the truth value of arguments[j].
struct SatPatternTable {
    std::vector<Formula> arguments;
    std::vector<std::uint64_t> satisfiable;

    int indexOf(Formula arg) const;
    bool contains(std::uint64_t pattern) const;
};

// Projects the table onto the literals of rho: J contains i iff the argument of literal i is
// true in some satisfiable full pattern. Sorted, without duplicates.
std::vector<std::uint64_t> projectPatterns(const SatPatternTable& table, const Clause& rho);

// Does the clause fit an arithmetic scheme of the configured logic at all?
bool arithmeticShape(const Clause& rho, const LogicConfig& cfg);

struct MatchingSearch {
    std::optional<RuleMatching> matching;
    bool exceedsBound = false;  // found matching has a coefficient larger than cfg.coeffBound
    std::size_t lpCalls = 0;
};

// An arithmetic matching of rho all of whose premise clauses have unsatisfiable negations,
// given the satisfiable literal patterns J (as produced by projectPatterns).
MatchingSearch refutingMatchingExists(const Clause& rho, const std::vector<std::uint64_t>& satisfiable,
                                      const LogicConfig& cfg);

// Enumerates arithmetic codes for rho with coefficient magnitudes in [1, bound] whose bound
// (k or m) is the best choice for refuting the given patterns; used to cross-check the LP.
void forEachCode(const Clause& rho, const std::vector<std::uint64_t>& satisfiable, const LogicConfig& cfg, long bound,
                 const std::function<bool(const RuleMatching&)>& visit);
std::optional<RuleMatching> refutingMatchingBruteForce(const Clause& rho, const std::vector<std::uint64_t>& satisfiable,
                                                       const LogicConfig& cfg, long bound);

// True iff no satisfiable pattern violates the matching's linear premise.
bool refutesPatterns(const RuleMatching& m, const std::vector<std::uint64_t>& satisfiable);

} // namespace cmlsat

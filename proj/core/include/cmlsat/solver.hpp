#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"
#include "cmlsat/logics.hpp"
#include "cmlsat/onestep.hpp"

namespace cmlsat {

struct SolveTrace;
using TracePtr = std::shared_ptr<const SolveTrace>;

// One demand: premise clause gamma of a matching of clause rho, and the recursive verdict on
// the negated instance ~(gamma sigma).
struct DemandRecord {
    Clause clause;
    RuleMatching matching;
    VarClause gamma;
    Formula demand;
    TracePtr child;
};

// A satisfiable sign pattern over the argument formulas of an arithmetic pseudovaluation.
struct PatternChild {
    std::uint64_t pattern;
    Formula formula;
    TracePtr child;
};

// Why a candidate pseudovaluation fails: a matching all of whose demands are unsatisfiable.
struct Refutation {
    Pseudovaluation candidate;
    Clause clause;
    RuleMatching matching;
    std::vector<DemandRecord> failedDemands;
};

struct SolveTrace {
    Formula formula = nullptr;
    bool satisfiable = false;
    int level = 0;

    // satisfiable nodes
    Pseudovaluation chosen;
    std::vector<DemandRecord> demands;          // shape logics: one per (clause, matching)
    std::vector<Formula> patternArguments;      // arithmetic logics
    std::vector<PatternChild> patterns;         // satisfiable patterns only

    // unsatisfiable nodes: one entry per candidate pseudovaluation
    std::vector<Refutation> refutations;
};

struct SolveStats {
    std::size_t nodes = 0;
    std::size_t memoHits = 0;
    std::size_t matchingsExplored = 0;
    std::size_t lpCalls = 0;
    int maxLevel = 0;
};

struct Verdict {
    bool satisfiable = false;
    TracePtr trace;
    std::optional<std::string> caveat;
    SolveStats stats;
};

// Nonempty subsets of the negated literals of H, binary-counter order with literal 0 as the
// least significant bit.
std::vector<Clause> enumerateContractedClauses(const Pseudovaluation& h);

// Conjunction of +-args[j] by the bits of pattern, constants folded.
Formula patternFormula(const std::vector<Formula>& args, std::uint64_t pattern);

// Distinct argument formulas of the non-atom literals, in literal order.
std::vector<Formula> patternArguments(const std::vector<Literal>& literals);

// For matchings whose variable i is the argument of literal i of rho: is ~(gamma sigma)
// realized by one of the satisfiable literal patterns?
bool patternFalsifies(const VarClause& gamma, const std::vector<std::uint64_t>& satisfiable);

class Solver {
public:
    explicit Solver(LogicConfig cfg);

    Verdict solve(Formula f);
    bool demandSatisfiable(const Clause& rho, const RuleMatching& m);

    const SolveStats& stats() const { return stats_; }
    const LogicConfig& config() const { return cfg_; }

private:
    TracePtr visit(Formula f, int level);
    bool refuteShape(const Pseudovaluation& h, const std::vector<Literal>& modalLits, int level, SolveTrace& sat,
                     std::optional<Refutation>& why);
    bool refuteArithmetic(const Pseudovaluation& h, const std::vector<Literal>& modalLits, const SatPatternTable& table,
                          int level, std::optional<Refutation>& why);
    void noteCaveat(const std::string& msg);

    LogicConfig cfg_;
    SolveStats stats_;
    std::unordered_map<Formula, TracePtr> memo_;
    std::optional<std::string> caveat_;
    int rootDepth_ = 0;
};

Verdict satisfiable(Formula f, const LogicConfig& cfg);

// Depth of the trace DAG (0 for a leaf).
int traceDepth(const TracePtr& t);

} // namespace cmlsat

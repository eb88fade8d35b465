#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"
#include "cmlsat/models.hpp"
#include "cmlsat/onestep.hpp"
#include "cmlsat/solver.hpp"

namespace cmlsat {

struct TableauNode {
    Pseudovaluation label;
    bool arithmetic = false;
    std::vector<Formula> patternArguments;
};

// Edge from a node to a pseudovaluation for one of its demands. Shape logics label edges by
// (clause, matching, gamma); arithmetic logics by a satisfiable sign pattern.
struct TableauEdge {
    int parent = 0;
    int child = 0;
    Formula demand = nullptr;
    Clause clause;
    std::optional<RuleMatching> matching;
    VarClause gamma;
    std::optional<std::uint64_t> pattern;
};

struct ShallowTableau {
    Formula formula = nullptr;
    int root = 0;
    std::vector<TableauNode> nodes;
    std::vector<TableauEdge> edges;
};

ShallowTableau extractTableau(const TracePtr& trace);
// nullopt when valid, otherwise the first failed obligation.
std::optional<std::string> validateTableau(const ShallowTableau& tb, Formula f, const LogicConfig& cfg);
int tableauDepth(const ShallowTableau& tb);

struct ModelResult {
    std::optional<ModelWitness> model;
    std::string note;
};

ModelResult tableauToModel(const ShallowTableau& tb, const LogicConfig& cfg);

struct ProofNode;

struct ClauseProof {
    Clause clause;
    bool tautology = false;
    std::optional<RuleMatching> rule;
    std::vector<ProofNode> premises;  // one per premise CNF clause, in enumeration order
};

// Proof of `goal`: the conjunction of the clauses propositionally entails the goal, and each
// clause is either a tautology or entailed by a rule conclusion with proven premises.
struct ProofNode {
    Formula goal = nullptr;
    std::vector<ClauseProof> clauses;
};

using ShallowProof = ProofNode;

// From an unsatisfiable trace whose formula is equivalent to ~goal.
ShallowProof extractProof(const TracePtr& trace, Formula goal);

struct ProofCheck {
    bool ok = true;
    std::string path;
    std::string reason;
};

ProofCheck checkProof(const ShallowProof& pf, Formula goal, const LogicConfig& cfg);

// Every modal atom mentioned in the proof is a subformula of the goal.
bool weakSubformulaAudit(const ShallowProof& pf, Formula goal);
std::size_t proofSize(const ShallowProof& pf);

using Certificate = std::variant<ShallowTableau, ModelWitness, ShallowProof>;

} // namespace cmlsat

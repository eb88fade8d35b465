#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "cmlsat/formula.hpp"

namespace cmlsat {

// Dense numbering of the modal atoms of a formula, used for propositional evaluation.
class AtomIndex {
public:
    AtomIndex() = default;
    explicit AtomIndex(std::vector<Formula> atoms);

    int indexOf(Formula a) const;  // -1 if absent
    std::size_t size() const { return atoms_.size(); }
    const std::vector<Formula>& atoms() const { return atoms_; }

private:
    std::vector<Formula> atoms_;
    std::unordered_map<Formula, int> index_;
};

// Three-valued evaluation over modal atoms: values are 1 (true), 0 (false), -1 (unknown).
// Atoms missing from the index count as unknown.
int evaluate3(Formula f, const AtomIndex& index, const std::vector<signed char>& values);

// True iff every assignment extending `values` makes f true (splitting on unknown atoms).
bool holdsForAllExtensions(Formula f, const AtomIndex& index, std::vector<signed char> values);

bool propTautology(Formula f, int truthTableLimit = 16);
bool propSatisfiable(Formula f, int truthTableLimit = 16);
bool propEntails(Formula premise, Formula conclusion, int truthTableLimit = 16);

// phi entails psi as clauses: phi is contained in psi, or psi is a tautology.
bool clauseEntails(const Clause& phi, const Clause& psi);
bool clauseIsTautology(const Clause& c);

// H |=_PL f, with H read as a partial assignment to modal atoms.
bool pseudovaluationEntails(const Pseudovaluation& h, Formula f);

// Lazily enumerates the total, propositionally consistent sign assignments H to MA(f)
// with H |=_PL f. Order: binary counter over negation bits, first atom most significant.
class PseudovaluationEnumerator {
public:
    explicit PseudovaluationEnumerator(Formula f);
    std::optional<Pseudovaluation> next();
    const std::vector<Formula>& atoms() const { return index_.atoms(); }

private:
    Formula f_;
    AtomIndex index_;
    std::vector<signed char> values_;
    std::vector<int> choice_;
    int level_ = 0;
};

std::vector<Pseudovaluation> pseudovaluationsFor(Formula f);

} // namespace cmlsat

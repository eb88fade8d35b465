#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace cmlsat {

enum class OpKind { Box, Graded, Majority, Prob, Coalition, Atom };

// A modal operator together with its index. Atoms are nullary operators.
struct ModalOperator {
    OpKind kind = OpKind::Box;
    unsigned long grade = 0;
    mpq_class prob;
    std::uint32_t coalition = 0; // bit i set <=> agent i+1 is a member
    std::string name;

    static ModalOperator box();
    static ModalOperator graded(unsigned long k);
    static ModalOperator majority();
    static ModalOperator probability(const mpq_class& p);
    static ModalOperator coalitionOf(std::uint32_t members);
    static ModalOperator atom(std::string name);

    bool isAtom() const { return kind == OpKind::Atom; }
    bool operator==(const ModalOperator& o) const;
    bool operator!=(const ModalOperator& o) const { return !(*this == o); }
    std::size_t hash() const;
};

// Textual form of an operator as it appears in formulas ("[]", "<2>", "W", "L{1/2}", "[C 1,2]", or the atom name).
std::string operatorString(const ModalOperator& op);

enum class NodeKind { Bottom, And, Not, Modal };

struct Node;
using Formula = const Node*;

// Hash-consed formula node. Structurally equal formulas share one node, so pointer
// equality is syntactic equality.
struct Node {
    NodeKind kind;
    Formula lhs;  // And: left conjunct; Not: argument; Modal: argument (null for atoms)
    Formula rhs;  // And: right conjunct
    ModalOperator op;
    std::uint32_t id;
    int depth;
};

Formula bottom();
Formula top();
Formula conj(Formula a, Formula b);
Formula neg(Formula a);
Formula modal(const ModalOperator& op, Formula arg);
Formula atom(const std::string& name);

Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula conjAll(const std::vector<Formula>& fs);  // empty -> top
Formula disjAll(const std::vector<Formula>& fs);  // empty -> bottom

// Strips one negation if present, otherwise adds one.
Formula negate(Formula a);

inline bool isAtom(Formula f) { return f->kind == NodeKind::Modal && f->op.isAtom(); }
inline bool isModal(Formula f) { return f->kind == NodeKind::Modal; }

int depth(Formula f);
// Size measure; set-valued indices count as `agents`.
std::size_t size(Formula f, int agents = 2);
std::size_t integerSize(const mpz_class& a);

// Top-level modal atoms (including propositional atoms) in first-occurrence order.
std::vector<Formula> modalAtoms(Formula f);
// All subformulas, each once, in first-occurrence preorder.
std::vector<Formula> subformulas(Formula f);
// Maximal rational denominator and grade, for oracle bounds.
struct IndexProfile {
    unsigned long maxGrade = 0;
    mpz_class denominatorLcm = 1;
    std::uint32_t coalitionsUsed = 0;
};
IndexProfile indexProfile(Formula f);

std::size_t internedCount();

struct Literal {
    Formula atom;
    bool positive;

    bool operator==(const Literal& o) const { return atom == o.atom && positive == o.positive; }
    bool operator!=(const Literal& o) const { return !(*this == o); }
    Literal negated() const { return {atom, !positive}; }
};

using Clause = std::vector<Literal>;
using ConjClause = std::vector<Literal>;

// A conjunctive clause over modal atoms, held in the order the atoms were enumerated.
struct Pseudovaluation {
    std::vector<Literal> literals;

    bool consistent() const;
    bool operator==(const Pseudovaluation& o) const;
};

Formula literalFormula(const Literal& l);
Formula clauseFormula(const Clause& c);     // disjunction, bottom when empty
Formula conjClauseFormula(const ConjClause& c);  // conjunction, top when empty

std::string toString(Formula f);
std::string toString(const Literal& l);
std::string toString(const Clause& c);      // "A | ~B"
std::string toString(const Pseudovaluation& h);  // "A & ~B"

} // namespace cmlsat

#include "cmlsat/propositional.hpp"

#include <algorithm>

namespace cmlsat {

AtomIndex::AtomIndex(std::vector<Formula> atoms) : atoms_(std::move(atoms))
{
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        index_.emplace(atoms_[i], static_cast<int>(i));
}

int AtomIndex::indexOf(Formula a) const
{
    auto it = index_.find(a);
    return it == index_.end() ? -1 : it->second;
}

int evaluate3(Formula f, const AtomIndex& index, const std::vector<signed char>& values)
{
    switch (f->kind) {
    case NodeKind::Bottom:
        return 0;
    case NodeKind::Not: {
        int v = evaluate3(f->lhs, index, values);
        return v < 0 ? -1 : 1 - v;
    }
    case NodeKind::And: {
        int l = evaluate3(f->lhs, index, values);
        if (l == 0)
            return 0;
        int r = evaluate3(f->rhs, index, values);
        if (r == 0)
            return 0;
        return (l == 1 && r == 1) ? 1 : -1;
    }
    case NodeKind::Modal: {
        int i = index.indexOf(f);
        return i < 0 ? -1 : values[static_cast<std::size_t>(i)];
    }
    }
    return -1;
}

bool holdsForAllExtensions(Formula f, const AtomIndex& index, std::vector<signed char> values)
{
    int v = evaluate3(f, index, values);
    if (v >= 0)
        return v == 1;
    auto it = std::find(values.begin(), values.end(), static_cast<signed char>(-1));
    if (it == values.end())
        return false;  // atoms outside the index remain unknown
    std::size_t i = static_cast<std::size_t>(it - values.begin());
    values[i] = 1;
    if (!holdsForAllExtensions(f, index, values))
        return false;
    values[i] = 0;
    return holdsForAllExtensions(f, index, values);
}

bool propTautology(Formula f, int truthTableLimit)
{
    AtomIndex index(modalAtoms(f));
    std::size_t n = index.size();
    if (static_cast<int>(n) <= truthTableLimit) {
        std::vector<signed char> values(n, 0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
            for (std::size_t i = 0; i < n; ++i)
                values[i] = static_cast<signed char>((mask >> i) & 1);
            if (evaluate3(f, index, values) != 1)
                return false;
        }
        return true;
    }
    return holdsForAllExtensions(f, index, std::vector<signed char>(n, -1));
}

bool propSatisfiable(Formula f, int truthTableLimit) { return !propTautology(neg(f), truthTableLimit); }

bool propEntails(Formula premise, Formula conclusion, int truthTableLimit)
{
    return propTautology(implies(premise, conclusion), truthTableLimit);
}

bool clauseIsTautology(const Clause& c)
{
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (c[i].atom == c[j].atom && c[i].positive != c[j].positive)
                return true;
    return false;
}

bool clauseEntails(const Clause& phi, const Clause& psi)
{
    if (clauseIsTautology(psi))
        return true;
    for (const Literal& l : phi)
        if (std::find(psi.begin(), psi.end(), l) == psi.end())
            return false;
    return true;
}

bool pseudovaluationEntails(const Pseudovaluation& h, Formula f)
{
    if (!h.consistent())
        return true;
    AtomIndex index(modalAtoms(f));
    std::vector<signed char> values(index.size(), -1);
    for (const Literal& l : h.literals) {
        int i = index.indexOf(l.atom);
        if (i >= 0)
            values[static_cast<std::size_t>(i)] = l.positive ? 1 : 0;
    }
    return holdsForAllExtensions(f, index, std::move(values));
}

PseudovaluationEnumerator::PseudovaluationEnumerator(Formula f)
    : f_(f), index_(modalAtoms(f)), values_(index_.size(), -1), choice_(index_.size(), 0)
{
}

std::optional<Pseudovaluation> PseudovaluationEnumerator::next()
{
    const int n = static_cast<int>(index_.size());
    while (level_ >= 0) {
        if (level_ == n) {
            bool ok = evaluate3(f_, index_, values_) == 1;
            --level_;
            if (ok) {
                Pseudovaluation h;
                for (int i = 0; i < n; ++i)
                    h.literals.push_back({index_.atoms()[static_cast<std::size_t>(i)], values_[static_cast<std::size_t>(i)] == 1});
                return h;
            }
            continue;
        }
        std::size_t l = static_cast<std::size_t>(level_);
        if (choice_[l] == 2) {
            choice_[l] = 0;
            values_[l] = -1;
            --level_;
            continue;
        }
        ++choice_[l];
        values_[l] = choice_[l] == 1 ? 1 : 0;
        if (evaluate3(f_, index_, values_) != 0)
            ++level_;
    }
    return std::nullopt;
}

std::vector<Pseudovaluation> pseudovaluationsFor(Formula f)
{
    std::vector<Pseudovaluation> out;
    PseudovaluationEnumerator e(f);
    while (auto h = e.next())
        out.push_back(std::move(*h));
    return out;
}

} // namespace cmlsat

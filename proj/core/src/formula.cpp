#include "cmlsat/formula.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace cmlsat {

ModalOperator ModalOperator::box() { return {}; }

ModalOperator ModalOperator::graded(unsigned long k)
{
    ModalOperator op;
    op.kind = OpKind::Graded;
    op.grade = k;
    return op;
}

ModalOperator ModalOperator::majority()
{
    ModalOperator op;
    op.kind = OpKind::Majority;
    return op;
}

ModalOperator ModalOperator::probability(const mpq_class& p)
{
    ModalOperator op;
    op.kind = OpKind::Prob;
    op.prob = p;
    op.prob.canonicalize();
    return op;
}

ModalOperator ModalOperator::coalitionOf(std::uint32_t members)
{
    ModalOperator op;
    op.kind = OpKind::Coalition;
    op.coalition = members;
    return op;
}

ModalOperator ModalOperator::atom(std::string name)
{
    ModalOperator op;
    op.kind = OpKind::Atom;
    op.name = std::move(name);
    return op;
}

bool ModalOperator::operator==(const ModalOperator& o) const
{
    if (kind != o.kind)
        return false;
    switch (kind) {
    case OpKind::Box:
    case OpKind::Majority:
        return true;
    case OpKind::Graded:
        return grade == o.grade;
    case OpKind::Prob:
        return prob == o.prob;
    case OpKind::Coalition:
        return coalition == o.coalition;
    case OpKind::Atom:
        return name == o.name;
    }
    return false;
}

std::size_t ModalOperator::hash() const
{
    std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ULL;
    switch (kind) {
    case OpKind::Graded:
        h ^= std::hash<unsigned long>{}(grade) + (h << 6);
        break;
    case OpKind::Prob:
        h ^= std::hash<std::string>{}(prob.get_str()) + (h << 6);
        break;
    case OpKind::Coalition:
        h ^= std::hash<std::uint32_t>{}(coalition) + (h << 6);
        break;
    case OpKind::Atom:
        h ^= std::hash<std::string>{}(name) + (h << 6);
        break;
    default:
        break;
    }
    return h;
}

std::string operatorString(const ModalOperator& op)
{
    switch (op.kind) {
    case OpKind::Box:
        return "[]";
    case OpKind::Graded:
        return "<" + std::to_string(op.grade) + ">";
    case OpKind::Majority:
        return "W";
    case OpKind::Prob:
        return "L{" + op.prob.get_str() + "}";
    case OpKind::Coalition: {
        std::string s = "[C";
        bool first = true;
        for (int i = 0; i < 32; ++i) {
            if (op.coalition & (1u << i)) {
                s += first ? " " : ",";
                s += std::to_string(i + 1);
                first = false;
            }
        }
        return s + "]";
    }
    case OpKind::Atom:
        return op.name;
    }
    return "?";
}

namespace {

struct Key {
    NodeKind kind;
    Formula lhs;
    Formula rhs;
    const ModalOperator* op;

    bool operator==(const Key& o) const
    {
        return kind == o.kind && lhs == o.lhs && rhs == o.rhs && (op == nullptr ? o.op == nullptr : (o.op != nullptr && *op == *o.op));
    }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const
    {
        std::size_t h = static_cast<std::size_t>(k.kind);
        h = h * 31 + std::hash<const void*>{}(k.lhs);
        h = h * 31 + std::hash<const void*>{}(k.rhs);
        if (k.op)
            h = h * 31 + k.op->hash();
        return h;
    }
};

class Interner {
public:
    Formula intern(NodeKind kind, Formula lhs, Formula rhs, const ModalOperator* op)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        Key probe{kind, lhs, rhs, op};
        auto it = table_.find(probe);
        if (it != table_.end())
            return it->second;
        int d = 0;
        switch (kind) {
        case NodeKind::Bottom:
            break;
        case NodeKind::And:
            d = std::max(lhs->depth, rhs->depth);
            break;
        case NodeKind::Not:
            d = lhs->depth;
            break;
        case NodeKind::Modal:
            d = lhs ? lhs->depth + 1 : 0;
            break;
        }
        nodes_.push_back(Node{kind, lhs, rhs, op ? *op : ModalOperator{}, static_cast<std::uint32_t>(nodes_.size()), d});
        const Node* n = &nodes_.back();
        table_.emplace(Key{kind, lhs, rhs, kind == NodeKind::Modal ? &n->op : nullptr}, n);
        return n;
    }

    std::size_t count()
    {
        std::lock_guard<std::mutex> lock(mutex_);
        return nodes_.size();
    }

private:
    std::mutex mutex_;
    std::deque<Node> nodes_;
    std::unordered_map<Key, Formula, KeyHash> table_;
};

Interner& interner()
{
    static Interner instance;
    return instance;
}

} // namespace

Formula bottom() { return interner().intern(NodeKind::Bottom, nullptr, nullptr, nullptr); }
Formula top() { return neg(bottom()); }
Formula conj(Formula a, Formula b) { return interner().intern(NodeKind::And, a, b, nullptr); }
Formula neg(Formula a) { return interner().intern(NodeKind::Not, a, nullptr, nullptr); }

Formula modal(const ModalOperator& op, Formula arg)
{
    return interner().intern(NodeKind::Modal, op.isAtom() ? nullptr : arg, nullptr, &op);
}

Formula atom(const std::string& name) { return modal(ModalOperator::atom(name), nullptr); }

Formula disj(Formula a, Formula b) { return neg(conj(neg(a), neg(b))); }
Formula implies(Formula a, Formula b) { return neg(conj(a, neg(b))); }
Formula iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }

Formula conjAll(const std::vector<Formula>& fs)
{
    if (fs.empty())
        return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
        acc = conj(acc, fs[i]);
    return acc;
}

Formula disjAll(const std::vector<Formula>& fs)
{
    if (fs.empty())
        return bottom();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
        acc = disj(acc, fs[i]);
    return acc;
}

Formula negate(Formula a) { return a->kind == NodeKind::Not ? a->lhs : neg(a); }

int depth(Formula f) { return f->depth; }

std::size_t integerSize(const mpz_class& a)
{
    mpz_class v = abs(a) + 1;
    // ceil(log2(v))
    std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
    mpz_class pow2 = mpz_class(1) << static_cast<unsigned>(bits - 1);
    return v == pow2 ? bits - 1 : bits;
}

namespace {

std::size_t operatorSize(const ModalOperator& op, int agents)
{
    switch (op.kind) {
    case OpKind::Graded:
        return integerSize(mpz_class(op.grade));
    case OpKind::Prob:
        return 1 + integerSize(op.prob.get_num()) + integerSize(op.prob.get_den());
    case OpKind::Coalition:
        return static_cast<std::size_t>(agents);
    default:
        return 0;
    }
}

std::size_t sizeRec(Formula f, int agents, std::unordered_map<Formula, std::size_t>& memo)
{
    auto it = memo.find(f);
    if (it != memo.end())
        return it->second;
    std::size_t s = 1;
    switch (f->kind) {
    case NodeKind::Bottom:
        break;
    case NodeKind::And:
        s += sizeRec(f->lhs, agents, memo) + sizeRec(f->rhs, agents, memo);
        break;
    case NodeKind::Not:
        s += sizeRec(f->lhs, agents, memo);
        break;
    case NodeKind::Modal:
        if (f->lhs)
            s += operatorSize(f->op, agents) + sizeRec(f->lhs, agents, memo);
        break;
    }
    memo[f] = s;
    return s;
}

} // namespace

std::size_t size(Formula f, int agents)
{
    std::unordered_map<Formula, std::size_t> memo;
    return sizeRec(f, agents, memo);
}

std::vector<Formula> modalAtoms(Formula f)
{
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        switch (g->kind) {
        case NodeKind::Bottom:
            break;
        case NodeKind::And:
            stack.push_back(g->rhs);
            stack.push_back(g->lhs);
            break;
        case NodeKind::Not:
            stack.push_back(g->lhs);
            break;
        case NodeKind::Modal:
            if (seen.insert(g).second)
                out.push_back(g);
            break;
        }
    }
    return out;
}

std::vector<Formula> subformulas(Formula f)
{
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (!seen.insert(g).second)
            continue;
        out.push_back(g);
        if (g->rhs)
            stack.push_back(g->rhs);
        if (g->lhs)
            stack.push_back(g->lhs);
    }
    return out;
}

IndexProfile indexProfile(Formula f)
{
    IndexProfile p;
    for (Formula g : subformulas(f)) {
        if (g->kind != NodeKind::Modal)
            continue;
        if (g->op.kind == OpKind::Graded)
            p.maxGrade = std::max(p.maxGrade, g->op.grade);
        if (g->op.kind == OpKind::Prob)
            p.denominatorLcm = lcm(p.denominatorLcm, mpz_class(g->op.prob.get_den()));
        if (g->op.kind == OpKind::Coalition)
            p.coalitionsUsed |= g->op.coalition;
    }
    return p;
}

std::size_t internedCount() { return interner().count(); }

bool Pseudovaluation::consistent() const
{
    for (std::size_t i = 0; i < literals.size(); ++i)
        for (std::size_t j = i + 1; j < literals.size(); ++j)
            if (literals[i].atom == literals[j].atom && literals[i].positive != literals[j].positive)
                return false;
    return true;
}

bool Pseudovaluation::operator==(const Pseudovaluation& o) const
{
    if (literals.size() != o.literals.size())
        return false;
    for (const Literal& l : literals)
        if (std::find(o.literals.begin(), o.literals.end(), l) == o.literals.end())
            return false;
    return true;
}

Formula literalFormula(const Literal& l) { return l.positive ? l.atom : neg(l.atom); }

Formula clauseFormula(const Clause& c)
{
    std::vector<Formula> fs;
    for (const Literal& l : c)
        fs.push_back(literalFormula(l));
    return disjAll(fs);
}

Formula conjClauseFormula(const ConjClause& c)
{
    std::vector<Formula> fs;
    for (const Literal& l : c)
        fs.push_back(literalFormula(l));
    return conjAll(fs);
}

namespace {

// Precedence levels: <-> 0, -> 1, | 2, & 3, unary and atomic 4.
void print(Formula f, int minLevel, std::string& out);

void wrap(int level, int minLevel, std::string& out, const std::function<void()>& body)
{
    if (level < minLevel)
        out += '(';
    body();
    if (level < minLevel)
        out += ')';
}

bool matchIff(Formula f, Formula& a, Formula& b)
{
    if (f->kind != NodeKind::And)
        return false;
    Formula l = f->lhs, r = f->rhs;
    if (l->kind != NodeKind::Not || r->kind != NodeKind::Not)
        return false;
    Formula li = l->lhs, ri = r->lhs;
    if (li->kind != NodeKind::And || ri->kind != NodeKind::And)
        return false;
    if (li->rhs->kind != NodeKind::Not || ri->rhs->kind != NodeKind::Not)
        return false;
    if (li->lhs != ri->rhs->lhs || ri->lhs != li->rhs->lhs)
        return false;
    a = li->lhs;
    b = li->rhs->lhs;
    return true;
}

void print(Formula f, int minLevel, std::string& out)
{
    switch (f->kind) {
    case NodeKind::Bottom:
        out += "false";
        return;
    case NodeKind::Modal:
        if (f->op.isAtom()) {
            out += f->op.name;
            return;
        }
        wrap(4, minLevel, out, [&] {
            out += operatorString(f->op);
            out += ' ';
            print(f->lhs, 4, out);
        });
        return;
    case NodeKind::And: {
        Formula a, b;
        if (matchIff(f, a, b)) {
            wrap(0, minLevel, out, [&] {
                print(a, 0, out);
                out += " <-> ";
                print(b, 1, out);
            });
            return;
        }
        wrap(3, minLevel, out, [&] {
            print(f->lhs, 3, out);
            out += " & ";
            print(f->rhs, 4, out);
        });
        return;
    }
    case NodeKind::Not: {
        Formula g = f->lhs;
        if (g->kind == NodeKind::Bottom) {
            out += "true";
            return;
        }
        if (g->kind == NodeKind::And && g->rhs->kind == NodeKind::Not) {
            Formula l = g->lhs, r = g->rhs->lhs;
            if (l->kind == NodeKind::Not) {
                wrap(2, minLevel, out, [&] {
                    print(l->lhs, 2, out);
                    out += " | ";
                    print(r, 3, out);
                });
            } else {
                wrap(1, minLevel, out, [&] {
                    print(l, 2, out);
                    out += " -> ";
                    print(r, 1, out);
                });
            }
            return;
        }
        if (g->kind == NodeKind::Modal && g->op.kind == OpKind::Majority && g->lhs->kind == NodeKind::Not) {
            wrap(4, minLevel, out, [&] {
                out += "M ";
                print(g->lhs->lhs, 4, out);
            });
            return;
        }
        wrap(4, minLevel, out, [&] {
            out += '~';
            print(g, 4, out);
        });
        return;
    }
    }
}

} // namespace

std::string toString(Formula f)
{
    std::string out;
    print(f, 0, out);
    return out;
}

std::string toString(const Literal& l) { return toString(literalFormula(l)); }

std::string toString(const Clause& c)
{
    if (c.empty())
        return "false";
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            s += " | ";
        std::string part;
        print(literalFormula(c[i]), 3, part);
        s += part;
    }
    return s;
}

std::string toString(const Pseudovaluation& h)
{
    if (h.literals.empty())
        return "true";
    std::string s;
    for (std::size_t i = 0; i < h.literals.size(); ++i) {
        if (i)
            s += " & ";
        std::string part;
        print(literalFormula(h.literals[i]), 4, part);
        s += part;
    }
    return s;
}

} // namespace cmlsat

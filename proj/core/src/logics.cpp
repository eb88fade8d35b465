#include "cmlsat/logics.hpp"

#include <algorithm>
#include <stdexcept>

#include "cmlsat/lp.hpp"

namespace cmlsat {

namespace {

bool allNonAtom(const Clause& rho)
{
    return std::all_of(rho.begin(), rho.end(), [](const Literal& l) { return !isAtom(l.atom); });
}

bool allOps(const Clause& rho, OpKind kind)
{
    return std::all_of(rho.begin(), rho.end(), [&](const Literal& l) { return l.atom->op.kind == kind; });
}

RuleMatching mirrorMatching(const Clause& rho, Logic logic, Scheme scheme)
{
    RuleMatching m;
    m.code.logic = logic;
    m.code.scheme = scheme;
    for (const Literal& l : rho) {
        m.code.signs.push_back(l.positive);
        m.code.operators.push_back(l.atom->op);
        m.substitution.push_back(l.atom->lhs);
    }
    return m;
}

bool pairwiseDisjoint(const std::vector<std::uint32_t>& cs)
{
    std::uint32_t seen = 0;
    for (std::uint32_t c : cs) {
        if (seen & c)
            return false;
        seen |= c;
    }
    return true;
}

// Coalition superadditivity rule: the distinguished coalition D, if the positive literals admit one.
std::optional<std::uint32_t> distinguishedCoalition(const std::vector<bool>& signs, const std::vector<ModalOperator>& ops,
                                                    std::uint32_t grand)
{
    std::optional<std::uint32_t> d;
    bool anyPositive = false;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (!signs[i])
            continue;
        anyPositive = true;
        if (ops[i].coalition == grand)
            continue;
        if (d)
            return std::nullopt;
        d = ops[i].coalition;
    }
    if (!anyPositive)
        return std::nullopt;
    return d ? *d : grand;
}

bool coalition4Applies(const std::vector<bool>& signs, const std::vector<ModalOperator>& ops, std::uint32_t grand)
{
    auto d = distinguishedCoalition(signs, ops, grand);
    if (!d)
        return false;
    std::vector<std::uint32_t> negs;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i])
            continue;
        if ((ops[i].coalition & ~*d) != 0)
            return false;
        negs.push_back(ops[i].coalition);
    }
    return pairwiseDisjoint(negs);
}

} // namespace

std::vector<RuleMatching> matchings(const Clause& rho, const LogicConfig& cfg)
{
    std::vector<RuleMatching> out;
    if (rho.empty() || !allNonAtom(rho))
        return out;
    out = congruenceMatchings(rho, cfg.logic);
    std::size_t positives = static_cast<std::size_t>(std::count_if(rho.begin(), rho.end(), [](const Literal& l) { return l.positive; }));
    switch (cfg.logic) {
    case Logic::E:
        break;
    case Logic::M:
        if (rho.size() == 2 && positives == 1 && allOps(rho, OpKind::Box)) {
            RuleMatching m = mirrorMatching(rho, cfg.logic, Scheme::Monotone);
            if (!m.code.signs[0]) {
                out.push_back(std::move(m));
            } else {
                // keep the negative literal first, as in the rule
                RuleMatching s;
                s.code.logic = cfg.logic;
                s.code.scheme = Scheme::Monotone;
                s.code.signs = {false, true};
                s.code.operators = {m.code.operators[1], m.code.operators[0]};
                s.substitution = {m.substitution[1], m.substitution[0]};
                out.push_back(std::move(s));
            }
        }
        break;
    case Logic::K:
    case Logic::KD:
        if (!allOps(rho, OpKind::Box))
            break;
        if (positives == 1)
            out.push_back(mirrorMatching(rho, cfg.logic, Scheme::KRule));
        else if (positives == 0 && cfg.logic == Logic::KD)
            out.push_back(mirrorMatching(rho, cfg.logic, Scheme::KDRule));
        break;
    case Logic::Coal: {
        if (!allOps(rho, OpKind::Coalition))
            break;
        RuleMatching m = mirrorMatching(rho, cfg.logic, Scheme::Coal1);
        if (positives == 0) {
            std::vector<std::uint32_t> cs;
            for (const auto& op : m.code.operators)
                cs.push_back(op.coalition);
            if (pairwiseDisjoint(cs))
                out.push_back(std::move(m));
        } else if (coalition4Applies(m.code.signs, m.code.operators, cfg.grandCoalition())) {
            m.code.scheme = Scheme::Coal4;
            out.push_back(std::move(m));
        }
        break;
    }
    case Logic::GML:
    case Logic::MAJ:
    case Logic::PML:
        break;
    }
    return out;
}

bool sideCondition(const RuleCode& code, const LogicConfig& cfg)
{
    const std::size_t n = code.arity();
    if (n == 0 || code.operators.size() != n)
        return false;
    if (code.logic != cfg.logic)
        return false;
    for (const auto& op : code.operators)
        if (op.isAtom() || !cfg.legal(op))
            return false;
    std::size_t positives = static_cast<std::size_t>(std::count(code.signs.begin(), code.signs.end(), true));
    bool arithmetic = isArithmetic(code.scheme);
    if (!arithmetic && (!code.coeffs.empty() || code.bound != 0))
        return false;
    if (arithmetic) {
        if (code.coeffs.size() != n)
            return false;
        for (std::size_t i = 0; i < n; ++i)
            if (sgn(code.coeffs[i]) == 0 || (sgn(code.coeffs[i]) > 0) != code.signs[i])
                return false;
    }
    auto allKind = [&](OpKind k) {
        return std::all_of(code.operators.begin(), code.operators.end(), [&](const ModalOperator& op) { return op.kind == k; });
    };

    switch (code.scheme) {
    case Scheme::Congruence:
        return n == 2 && !code.signs[0] && code.signs[1] && code.operators[0] == code.operators[1];
    case Scheme::Monotone:
        return cfg.logic == Logic::M && n == 2 && !code.signs[0] && code.signs[1] && allKind(OpKind::Box);
    case Scheme::KRule:
        return (cfg.logic == Logic::K || cfg.logic == Logic::KD) && positives == 1 && allKind(OpKind::Box);
    case Scheme::KDRule:
        return cfg.logic == Logic::KD && positives == 0 && allKind(OpKind::Box);
    case Scheme::Coal1: {
        if (cfg.logic != Logic::Coal || positives != 0 || !allKind(OpKind::Coalition))
            return false;
        std::vector<std::uint32_t> cs;
        for (const auto& op : code.operators)
            cs.push_back(op.coalition);
        return pairwiseDisjoint(cs);
    }
    case Scheme::Coal4:
        return cfg.logic == Logic::Coal && allKind(OpKind::Coalition) &&
               coalition4Applies(code.signs, code.operators, cfg.grandCoalition());
    case Scheme::Graded: {
        if (cfg.logic != Logic::GML || !allKind(OpKind::Graded) || code.bound != 0)
            return false;
        mpz_class lhs = 0, rhs = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const mpz_class k = code.operators[i].grade;
            if (code.coeffs[i] < 0)
                lhs += -code.coeffs[i] * (k + 1);
            else
                rhs += code.coeffs[i] * k;
        }
        return lhs >= rhs;
    }
    case Scheme::Majority: {
        if (cfg.logic != Logic::MAJ)
            return false;
        mpz_class side1 = -1, sumS = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& op = code.operators[i];
            const mpz_class& r = code.coeffs[i];
            if (op.kind == OpKind::Graded) {
                const mpz_class k = op.grade;
                if (r < 0)
                    side1 += -r * (k + 1);
                else
                    side1 -= r * k;
            } else if (op.kind == OpKind::Majority) {
                sumS += r;
                if (r > 0)
                    side1 += r;
            } else {
                return false;
            }
        }
        side1 -= code.bound > 0 ? code.bound : mpz_class(0);
        return side1 >= 0 && 2 * code.bound - sumS >= 0;
    }
    case Scheme::Prob: {
        if (cfg.logic != Logic::PML || !allKind(OpKind::Prob))
            return false;
        mpq_class sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            sum += mpq_class(code.coeffs[i]) * code.operators[i].prob;
        if (positives == 0)
            return sum < mpq_class(code.bound);
        return sum <= mpq_class(code.bound);
    }
    }
    return false;
}

int SatPatternTable::indexOf(Formula arg) const
{
    auto it = std::find(arguments.begin(), arguments.end(), arg);
    return it == arguments.end() ? -1 : static_cast<int>(it - arguments.begin());
}

bool SatPatternTable::contains(std::uint64_t pattern) const
{
    return std::find(satisfiable.begin(), satisfiable.end(), pattern) != satisfiable.end();
}

std::vector<std::uint64_t> projectPatterns(const SatPatternTable& table, const Clause& rho)
{
    std::vector<int> idx;
    for (const auto& l : rho) {
        int i = table.indexOf(l.atom->lhs);
        if (i < 0)
            throw std::logic_error("pattern table does not cover clause argument " + toString(l.atom->lhs));
        idx.push_back(i);
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : table.satisfiable) {
        std::uint64_t J = 0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            if ((p >> idx[i]) & 1)
                J |= std::uint64_t(1) << i;
        out.push_back(J);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool arithmeticShape(const Clause& rho, const LogicConfig& cfg)
{
    if (rho.empty() || !allNonAtom(rho) || rho.size() > 30)
        return false;
    switch (cfg.logic) {
    case Logic::GML:
        return allOps(rho, OpKind::Graded);
    case Logic::MAJ:
        return std::all_of(rho.begin(), rho.end(), [](const Literal& l) {
            return l.atom->op.kind == OpKind::Graded || l.atom->op.kind == OpKind::Majority;
        });
    case Logic::PML:
        return allOps(rho, OpKind::Prob);
    default:
        return false;
    }
}

bool refutesPatterns(const RuleMatching& m, const std::vector<std::uint64_t>& satisfiable)
{
    for (std::uint64_t J : satisfiable)
        if (linearSum(m.code.coeffs, J) < m.code.bound)
            return false;
    return true;
}

namespace {

Scheme arithmeticScheme(Logic logic)
{
    switch (logic) {
    case Logic::GML:
        return Scheme::Graded;
    case Logic::MAJ:
        return Scheme::Majority;
    default:
        return Scheme::Prob;
    }
}

RuleMatching skeleton(const Clause& rho, const LogicConfig& cfg)
{
    RuleMatching m = mirrorMatching(rho, cfg.logic, arithmeticScheme(cfg.logic));
    m.code.coeffs.assign(rho.size(), 0);
    return m;
}

// Turns a rational solution (coefficients and bound) into the primitive integer code.
void integralize(std::vector<mpq_class> values, RuleMatching& m)
{
    mpz_class den = 1;
    for (const auto& v : values)
        den = lcm(den, mpz_class(v.get_den()));
    std::vector<mpz_class> ints;
    mpz_class g = 0;
    for (const auto& v : values) {
        mpz_class x = v.get_num() * (den / v.get_den());
        ints.push_back(x);
        g = gcd(g, x);
    }
    if (g > 1)
        for (auto& x : ints)
            x /= g;
    for (std::size_t i = 0; i < m.code.arity(); ++i)
        m.code.coeffs[i] = ints[i];
    m.code.bound = ints.back();
}

mpq_class eps(const Literal& l) { return l.positive ? 1 : -1; }

} // namespace

MatchingSearch refutingMatchingExists(const Clause& rho, const std::vector<std::uint64_t>& satisfiable, const LogicConfig& cfg)
{
    MatchingSearch out;
    if (!arithmeticShape(rho, cfg))
        return out;
    const std::size_t n = rho.size();

    // Coefficients are r_i = eps_i * (1 + y_i) with y_i >= 0; the bound is split into
    // nonnegative parts. Every constraint below is homogeneous in (r, bound) except the
    // strict ones, which are normalized to ">= 1"; solutions therefore scale to integers.
    auto patternRow = [&](std::uint64_t J, std::size_t vars, std::vector<mpq_class>& row, mpq_class& constant) {
        row.assign(vars, 0);
        constant = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (J & (std::uint64_t(1) << i)) {
                row[i] = eps(rho[i]);
                constant += eps(rho[i]);
            }
    };

    std::vector<std::vector<mpq_class>> solutions;  // r_1..r_n, bound

    auto solve = [&](LinearProgram& lp, const std::function<mpq_class(const std::vector<mpq_class>&)>& boundOf) {
        lp.objective.assign(lp.vars, 1);
        ++out.lpCalls;
        LpResult r = solveLp(lp);
        if (r.status != LpStatus::Optimal)
            return;
        std::vector<mpq_class> v;
        for (std::size_t i = 0; i < n; ++i)
            v.push_back(eps(rho[i]) * (1 + r.x[i]));
        v.push_back(boundOf(r.x));
        solutions.push_back(std::move(v));
    };

    if (cfg.logic == Logic::GML) {
        LinearProgram lp;
        lp.vars = n;
        for (std::uint64_t J : satisfiable) {
            std::vector<mpq_class> row;
            mpq_class c;
            patternRow(J, n, row, c);
            lp.add(row, Sense::GE, -c);
        }
        std::vector<mpq_class> row(n);
        mpq_class rhs = 1;
        for (std::size_t i = 0; i < n; ++i) {
            mpq_class k = static_cast<unsigned long>(rho[i].atom->op.grade);
            if (rho[i].positive) {
                row[i] = -k;
                rhs += k;
            } else {
                row[i] = k + 1;
                rhs -= k + 1;
            }
        }
        lp.add(row, Sense::GE, rhs);
        solve(lp, [](const std::vector<mpq_class>&) { return mpq_class(0); });
    } else if (cfg.logic == Logic::PML) {
        // variables: y_1..y_n, kp, kn
        LinearProgram lp;
        lp.vars = n + 2;
        for (std::uint64_t J : satisfiable) {
            std::vector<mpq_class> row;
            mpq_class c;
            patternRow(J, n + 2, row, c);
            row[n] = -1;
            row[n + 1] = 1;
            lp.add(row, Sense::GE, -c);
        }
        // k - sum r_i p_i >= 0 (>= 1 when every literal is negative)
        std::vector<mpq_class> row(n + 2);
        mpq_class c = 0;
        bool allNegative = true;
        for (std::size_t i = 0; i < n; ++i) {
            const mpq_class& p = rho[i].atom->op.prob;
            row[i] = -eps(rho[i]) * p;
            c -= eps(rho[i]) * p;
            allNegative = allNegative && !rho[i].positive;
        }
        row[n] = 1;
        row[n + 1] = -1;
        lp.add(row, Sense::GE, (allNegative ? mpq_class(1) : mpq_class(0)) - c);
        solve(lp, [&](const std::vector<mpq_class>& x) { return mpq_class(x[n] - x[n + 1]); });
    } else {
        // MAJ, solved separately for m >= 0 and m <= 0; variables y_1..y_n, mu (|m|)
        mpq_class aConst = -0;
        std::vector<mpq_class> aRow(n + 1), sRow(n + 1);
        mpq_class sConst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& op = rho[i].atom->op;
            if (op.kind == OpKind::Graded) {
                mpq_class k = static_cast<unsigned long>(op.grade);
                if (rho[i].positive) {
                    aRow[i] = -k;
                    aConst -= k;
                } else {
                    aRow[i] = k + 1;
                    aConst += k + 1;
                }
            } else {
                if (rho[i].positive) {
                    aRow[i] = 1;
                    aConst += 1;
                }
                sRow[i] = eps(rho[i]);
                sConst += eps(rho[i]);
            }
        }
        for (int signM : {1, -1}) {
            LinearProgram lp;
            lp.vars = n + 1;
            for (std::uint64_t J : satisfiable) {
                std::vector<mpq_class> row;
                mpq_class c;
                patternRow(J, n + 1, row, c);
                row[n] = -signM;  // sum_J coeff - m >= 0
                lp.add(row, Sense::GE, -c);
            }
            // A - max(m,0) >= 1
            std::vector<mpq_class> a = aRow;
            a[n] = signM > 0 ? -1 : 0;
            lp.add(a, Sense::GE, 1 - aConst);
            // 2m - sum s >= 0
            std::vector<mpq_class> s(n + 1);
            for (std::size_t i = 0; i < n; ++i)
                s[i] = -sRow[i];
            s[n] = 2 * signM;
            lp.add(s, Sense::GE, sConst);
            solve(lp, [&](const std::vector<mpq_class>& x) { return mpq_class(signM * x[n]); });
            if (!solutions.empty())
                break;
        }
    }

    if (solutions.empty())
        return out;
    RuleMatching m = skeleton(rho, cfg);
    integralize(solutions.front(), m);
    if (!sideCondition(m.code, cfg) || !refutesPatterns(m, satisfiable))
        throw std::logic_error("arithmetic matching search produced an invalid code: " + m.code.toString());
    mpz_class bound = cfg.coeffBound;
    for (const auto& r : m.code.coeffs)
        if (abs(r) > bound)
            out.exceedsBound = true;
    if (abs(m.code.bound) > bound * static_cast<long>(n))
        out.exceedsBound = true;
    out.matching = std::move(m);
    return out;
}

void forEachCode(const Clause& rho, const std::vector<std::uint64_t>& satisfiable, const LogicConfig& cfg, long bound,
                 const std::function<bool(const RuleMatching&)>& visit)
{
    if (!arithmeticShape(rho, cfg) || bound < 1)
        return;
    const std::size_t n = rho.size();
    std::vector<long> mag(n, 1);
    RuleMatching m = skeleton(rho, cfg);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i)
            m.code.coeffs[i] = rho[i].positive ? mag[i] : -mag[i];
        std::optional<mpz_class> minJ;
        for (std::uint64_t J : satisfiable) {
            mpz_class s = linearSum(m.code.coeffs, J);
            if (!minJ || s < *minJ)
                minJ = s;
        }
        bool ok = true;
        if (cfg.logic == Logic::GML) {
            m.code.bound = 0;
        } else if (cfg.logic == Logic::PML) {
            if (minJ) {
                m.code.bound = *minJ;
            } else {
                mpq_class sum = 0;
                for (std::size_t i = 0; i < n; ++i)
                    sum += mpq_class(m.code.coeffs[i]) * rho[i].atom->op.prob;
                mpz_class c;
                mpz_fdiv_q(c.get_mpz_t(), sum.get_num_mpz_t(), sum.get_den_mpz_t());
                m.code.bound = c + 1;
            }
        } else {
            mpz_class sumS = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (rho[i].atom->op.kind == OpKind::Majority)
                    sumS += m.code.coeffs[i];
            mpz_class q;
            mpz_cdiv_q_ui(q.get_mpz_t(), sumS.get_mpz_t(), 2);
            m.code.bound = q;
        }
        if (ok && sideCondition(m.code, cfg) && !visit(m))
            return;
        std::size_t i = 0;
        while (i < n && mag[i] == bound) {
            mag[i] = 1;
            ++i;
        }
        if (i == n)
            return;
        ++mag[i];
    }
}

std::optional<RuleMatching> refutingMatchingBruteForce(const Clause& rho, const std::vector<std::uint64_t>& satisfiable,
                                                       const LogicConfig& cfg, long bound)
{
    std::optional<RuleMatching> found;
    forEachCode(rho, satisfiable, cfg, bound, [&](const RuleMatching& m) {
        if (refutesPatterns(m, satisfiable)) {
            found = m;
            return false;
        }
        return true;
    });
    return found;
}

} // namespace cmlsat

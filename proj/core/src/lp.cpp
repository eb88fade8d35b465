#include "cmlsat/lp.hpp"

#include <optional>

namespace cmlsat {

void LinearProgram::add(std::vector<mpq_class> coeffs, Sense sense, mpq_class rhs)
{
    coeffs.resize(vars);
    constraints.push_back({std::move(coeffs), sense, std::move(rhs)});
}

namespace {

struct Tableau {
    std::vector<std::vector<mpq_class>> rows;  // last entry is the right-hand side
    std::vector<std::size_t> basis;
    std::size_t cols = 0;

    void pivot(std::size_t r, std::size_t c)
    {
        mpq_class p = rows[r][c];
        for (auto& v : rows[r])
            v /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0)
                continue;
            mpq_class f = rows[i][c];
            for (std::size_t j = 0; j <= cols; ++j)
                if (sgn(rows[r][j]) != 0)
                    rows[i][j] -= f * rows[r][j];
        }
        basis[r] = c;
    }
};

enum class Outcome { Optimal, Unbounded };

// Minimizes cost over the tableau; columns with allowed[j] == false never enter.
Outcome runSimplex(Tableau& t, const std::vector<mpq_class>& cost, const std::vector<bool>& allowed)
{
    for (;;) {
        std::optional<std::size_t> entering;
        for (std::size_t j = 0; j < t.cols && !entering; ++j) {
            if (!allowed[j])
                continue;
            mpq_class r = cost[j];
            for (std::size_t i = 0; i < t.rows.size(); ++i)
                if (sgn(t.rows[i][j]) != 0)
                    r -= cost[t.basis[i]] * t.rows[i][j];
            if (sgn(r) < 0)
                entering = j;
        }
        if (!entering)
            return Outcome::Optimal;
        std::size_t c = *entering;
        std::optional<std::size_t> leave;
        mpq_class best;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            if (sgn(t.rows[i][c]) <= 0)
                continue;
            mpq_class ratio = t.rows[i][t.cols] / t.rows[i][c];
            if (!leave || ratio < best || (ratio == best && t.basis[i] < t.basis[*leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (!leave)
            return Outcome::Unbounded;
        t.pivot(*leave, c);
    }
}

} // namespace

LpResult solveLp(const LinearProgram& lp)
{
    const std::size_t n = lp.vars;
    const std::size_t m = lp.constraints.size();

    std::size_t slackCount = 0, artCount = 0;
    std::vector<Sense> senses(m);
    std::vector<int> flip(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        Sense s = lp.constraints[i].sense;
        if (sgn(lp.constraints[i].rhs) < 0) {
            flip[i] = -1;
            if (s == Sense::LE)
                s = Sense::GE;
            else if (s == Sense::GE)
                s = Sense::LE;
        }
        senses[i] = s;
        if (s != Sense::EQ)
            ++slackCount;
        if (s != Sense::LE)
            ++artCount;
    }

    Tableau t;
    t.cols = n + slackCount + artCount;
    t.rows.assign(m, std::vector<mpq_class>(t.cols + 1));
    t.basis.assign(m, 0);
    std::vector<bool> artificial(t.cols, false);
    std::size_t nextSlack = n, nextArt = n + slackCount;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        for (std::size_t j = 0; j < n && j < c.coeffs.size(); ++j)
            t.rows[i][j] = c.coeffs[j] * flip[i];
        t.rows[i][t.cols] = c.rhs * flip[i];
        switch (senses[i]) {
        case Sense::LE:
            t.rows[i][nextSlack] = 1;
            t.basis[i] = nextSlack++;
            break;
        case Sense::GE:
            t.rows[i][nextSlack++] = -1;
            t.rows[i][nextArt] = 1;
            artificial[nextArt] = true;
            t.basis[i] = nextArt++;
            break;
        case Sense::EQ:
            t.rows[i][nextArt] = 1;
            artificial[nextArt] = true;
            t.basis[i] = nextArt++;
            break;
        }
    }

    LpResult result;
    std::vector<bool> allowed(t.cols, true);
    if (artCount > 0) {
        std::vector<mpq_class> phase1(t.cols);
        for (std::size_t j = 0; j < t.cols; ++j)
            phase1[j] = artificial[j] ? 1 : 0;
        runSimplex(t, phase1, allowed);
        mpq_class infeas;
        for (std::size_t i = 0; i < m; ++i)
            if (artificial[t.basis[i]])
                infeas += t.rows[i][t.cols];
        if (sgn(infeas) > 0) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Drive remaining (zero-valued) artificials out of the basis, dropping redundant rows.
        for (std::size_t i = 0; i < t.rows.size();) {
            if (!artificial[t.basis[i]]) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < t.cols && !col; ++j)
                if (!artificial[j] && sgn(t.rows[i][j]) != 0)
                    col = j;
            if (col) {
                t.pivot(i, *col);
                ++i;
            } else {
                t.rows.erase(t.rows.begin() + static_cast<long>(i));
                t.basis.erase(t.basis.begin() + static_cast<long>(i));
            }
        }
        for (std::size_t j = 0; j < t.cols; ++j)
            allowed[j] = !artificial[j];
    }

    std::vector<mpq_class> cost(t.cols);
    for (std::size_t j = 0; j < n && j < lp.objective.size(); ++j)
        cost[j] = lp.maximize ? mpq_class(-lp.objective[j]) : lp.objective[j];
    if (runSimplex(t, cost, allowed) == Outcome::Unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }
    result.status = LpStatus::Optimal;
    result.x.assign(n, 0);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < n)
            result.x[t.basis[i]] = t.rows[i][t.cols];
    for (std::size_t j = 0; j < n && j < lp.objective.size(); ++j)
        result.value += lp.objective[j] * result.x[j];
    return result;
}

namespace {

struct BranchState {
    const LinearProgram* base;
    std::vector<long> lower, upper;
    std::size_t nodes = 0;
    std::size_t limit;
    bool exhausted = false;
    std::optional<mpq_class> bestValue;
    std::vector<mpz_class> best;
};

void branch(BranchState& st)
{
    if (st.bestValue && st.base->objective.empty())
        return;
    if (st.nodes++ >= st.limit) {
        st.exhausted = true;
        return;
    }
    LinearProgram lp = *st.base;
    for (std::size_t j = 0; j < lp.vars; ++j) {
        std::vector<mpq_class> row(lp.vars);
        row[j] = 1;
        if (st.lower[j] > 0)
            lp.add(row, Sense::GE, st.lower[j]);
        lp.add(row, Sense::LE, st.upper[j]);
    }
    LpResult r = solveLp(lp);
    if (r.status != LpStatus::Optimal)
        return;
    if (st.bestValue && !lp.objective.empty()) {
        bool worse = lp.maximize ? r.value <= *st.bestValue : r.value >= *st.bestValue;
        if (worse)
            return;
    }
    for (std::size_t j = 0; j < lp.vars; ++j) {
        if (r.x[j].get_den() == 1)
            continue;
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), r.x[j].get_num_mpz_t(), r.x[j].get_den_mpz_t());
        long f = fl.get_si();
        long saved = st.upper[j];
        st.upper[j] = f;
        branch(st);
        st.upper[j] = saved;
        saved = st.lower[j];
        st.lower[j] = f + 1;
        branch(st);
        st.lower[j] = saved;
        return;
    }
    st.bestValue = r.value;
    st.best.clear();
    for (const auto& v : r.x)
        st.best.push_back(v.get_num());
}

} // namespace

IlpResult solveIlp(const LinearProgram& lp, const std::vector<long>& upper, std::size_t nodeLimit)
{
    BranchState st;
    st.base = &lp;
    st.lower.assign(lp.vars, 0);
    st.upper = upper;
    st.upper.resize(lp.vars, 0);
    st.limit = nodeLimit;
    branch(st);
    IlpResult out;
    out.feasible = st.bestValue.has_value();
    out.exhausted = st.exhausted && !out.feasible;
    out.x = st.best;
    return out;
}

} // namespace cmlsat

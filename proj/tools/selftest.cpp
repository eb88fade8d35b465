#include "selftest.hpp"

#include <algorithm>

#include "cmlsat/logics.hpp"
#include "cmlsat/oracle.hpp"

namespace cmlsat::selftest {

std::uint64_t Rng::next()
{
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ModalOperator sampleOperator(const LogicConfig& cfg, Rng& rng)
{
    switch (cfg.logic) {
    case Logic::GML:
        return ModalOperator::graded(rng.below(4));
    case Logic::MAJ:
        return rng.coin() ? ModalOperator::majority() : ModalOperator::graded(rng.below(3));
    case Logic::PML: {
        long b = 1 + static_cast<long>(rng.below(6));
        long a = static_cast<long>(rng.below(static_cast<std::uint64_t>(b) + 1));
        return ModalOperator::probability(mpq_class(a, b));
    }
    case Logic::Coal: {
        std::uint32_t grand = cfg.grandCoalition();
        return ModalOperator::coalitionOf(static_cast<std::uint32_t>(1 + rng.below(grand)));
    }
    default:
        return ModalOperator::box();
    }
}

namespace {

std::optional<RuleCode> arithmeticCode(const LogicConfig& cfg, const std::vector<ModalOperator>& ops, const std::vector<bool>& signs,
                                       Rng& rng)
{
    RuleCode code;
    code.logic = cfg.logic;
    code.scheme = cfg.logic == Logic::GML ? Scheme::Graded : cfg.logic == Logic::MAJ ? Scheme::Majority : Scheme::Prob;
    code.operators = ops;
    code.signs = signs;
    bool anyPositive = false;
    for (std::size_t k = 0; k < ops.size(); ++k) {
        long mag = 1 + static_cast<long>(rng.below(4));
        code.coeffs.push_back(signs[k] ? mpz_class(mag) : mpz_class(-mag));
        anyPositive = anyPositive || signs[k];
    }
    if (cfg.logic == Logic::PML) {
        mpq_class s = 0;
        for (std::size_t k = 0; k < ops.size(); ++k)
            s += mpq_class(code.coeffs[k]) * ops[k].prob;
        mpz_class c;
        if (anyPositive)
            mpz_cdiv_q(c.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
        else {
            mpz_fdiv_q(c.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
            ++c;
        }
        code.bound = c;
    } else if (cfg.logic == Logic::MAJ) {
        mpz_class sumS = 0;
        for (std::size_t k = 0; k < ops.size(); ++k)
            if (ops[k].kind == OpKind::Majority)
                sumS += code.coeffs[k];
        mpz_cdiv_q_ui(code.bound.get_mpz_t(), sumS.get_mpz_t(), 2);
    }
    if (!sideCondition(code, cfg))
        return std::nullopt;
    return code;
}

Clause freshClause(const std::vector<ModalOperator>& ops, const std::vector<bool>& signs, const std::string& prefix)
{
    Clause rho;
    for (std::size_t k = 0; k < ops.size(); ++k)
        rho.push_back({modal(ops[k], atom(prefix + std::to_string(k + 1))), static_cast<bool>(signs[k])});
    return rho;
}

std::optional<RuleCode> sampleOne(const LogicConfig& cfg, Rng& rng, std::optional<ModalOperator> negativeFirst = std::nullopt,
                                  bool needPositive = false)
{
    const std::size_t n = 1 + rng.below(4);
    std::vector<ModalOperator> ops;
    std::vector<bool> signs;
    for (std::size_t k = 0; k < n; ++k) {
        ops.push_back(sampleOperator(cfg, rng));
        signs.push_back(rng.coin());
    }
    if (negativeFirst) {
        ops[0] = *negativeFirst;
        signs[0] = false;
    }
    if (needPositive && std::find(signs.begin(), signs.end(), true) == signs.end())
        signs[n - 1] = true;
    if (cfg.arithmetic()) {
        if (n == 2 && !negativeFirst && !needPositive && rng.below(8) == 0) {
            ops[1] = ops[0];
            signs = {false, true};
            auto ms = congruenceMatchings(freshClause(ops, signs, "a"), cfg.logic);
            if (!ms.empty())
                return ms.front().code;
        }
        return arithmeticCode(cfg, ops, signs, rng);
    }
    auto ms = matchings(freshClause(ops, signs, "a"), cfg);
    if (ms.empty())
        return std::nullopt;
    return ms[rng.below(ms.size())].code;
}

} // namespace

std::vector<RuleCode> sampleCodes(const LogicConfig& cfg, std::uint64_t seed, std::size_t count)
{
    Rng rng(seed);
    std::vector<RuleCode> out;
    for (std::size_t attempts = 0; out.size() < count && attempts < 200 * count + 1000; ++attempts)
        if (auto c = sampleOne(cfg, rng))
            out.push_back(std::move(*c));
    return out;
}

std::vector<ClosurePair> sampleClosurePairs(const LogicConfig& cfg, std::uint64_t seed, std::size_t count)
{
    Rng rng(seed);
    std::vector<ClosurePair> out;
    for (std::size_t attempts = 0; out.size() < count && attempts < 500 * count + 1000; ++attempts) {
        auto c1 = sampleOne(cfg, rng, std::nullopt, true);
        if (!c1 || c1->scheme == Scheme::Congruence)
            continue;
        std::vector<std::size_t> pos;
        for (std::size_t k = 0; k < c1->arity(); ++k)
            if (c1->signs[k])
                pos.push_back(k);
        std::size_t i = pos[rng.below(pos.size())];
        auto c2 = sampleOne(cfg, rng, c1->operators[i]);
        if (!c2 || c2->scheme != c1->scheme || c2->signs[0] || c2->operators[0] != c1->operators[i])
            continue;
        out.push_back({*c1, i, *c2, 0});
    }
    return out;
}

nlohmann::json report(const LogicConfig& cfg, std::uint64_t seed, std::size_t samples, std::size_t pairs, bool& ok)
{
    using nlohmann::json;
    ok = true;
    FunctorBackend fb = backendFor(cfg);
    std::vector<RuleCode> codes = sampleCodes(cfg, seed, samples);
    json failures = json::array();
    for (const RuleCode& c : codes) {
        OneStepReport r = oneStepSound(c, fb, cfg.oracle.carrier);
        if (!r.sound)
            failures.push_back(r.counterexample);
    }
    ok = ok && failures.empty() && codes.size() == samples;
    json rep = {{"logic", cfg.name()},
                {"backend", backendName(fb.kind)},
                {"carrier", cfg.oracle.carrier},
                {"soundness", {{"requested", samples}, {"checked", codes.size()}, {"failures", failures}}}};
    if (cfg.arithmetic()) {
        std::vector<ClosurePair> ps = sampleClosurePairs(cfg, seed ^ 0x5bd1e995ULL, pairs);
        std::size_t subsumed = 0, sums = 0;
        json bad = json::array();
        for (const auto& p : ps) {
            ClosureReport r = resolutionClosure(p.first, p.i, p.second, p.j, cfg);
            subsumed += r.subsumed;
            sums += r.sumCodeAdmissible;
            if (!r.subsumed)
                bad.push_back(p.first.toString() + " / " + p.second.toString() + ": " + r.detail);
        }
        ok = ok && bad.empty() && ps.size() == pairs;
        rep["closure"] = {{"requested", pairs}, {"checked", ps.size()}, {"subsumed", subsumed}, {"sumCodeAdmissible", sums}, {"failures", bad}};
    }
    rep["ok"] = ok;
    return rep;
}

} // namespace cmlsat::selftest

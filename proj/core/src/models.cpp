#include "cmlsat/models.hpp"

#include <algorithm>
#include <unordered_map>

namespace cmlsat {

std::string frameName(FrameKind k)
{
    switch (k) {
    case FrameKind::Kripke:
        return "kripke";
    case FrameKind::Multigraph:
        return "multigraph";
    case FrameKind::Neighbourhood:
        return "neighbourhood";
    case FrameKind::Distribution:
        return "distribution";
    case FrameKind::Game:
        return "game";
    }
    return "?";
}

FrameKind frameFromName(const std::string& name)
{
    for (FrameKind k : {FrameKind::Kripke, FrameKind::Multigraph, FrameKind::Neighbourhood, FrameKind::Distribution, FrameKind::Game})
        if (frameName(k) == name)
            return k;
    throw ModelError("unknown frame kind '" + name + "'");
}

FrameKind frameFor(Logic logic)
{
    switch (logic) {
    case Logic::K:
    case Logic::KD:
        return FrameKind::Kripke;
    case Logic::E:
    case Logic::M:
        return FrameKind::Neighbourhood;
    case Logic::GML:
    case Logic::MAJ:
        return FrameKind::Multigraph;
    case Logic::PML:
        return FrameKind::Distribution;
    case Logic::Coal:
        return FrameKind::Game;
    }
    return FrameKind::Kripke;
}

namespace {

class Checker {
public:
    explicit Checker(const ModelWitness& mw) : mw_(mw) {}

    bool holds(int s, Formula f)
    {
        if (s < 0 || static_cast<std::size_t>(s) >= mw_.states.size())
            throw ModelError("state index out of range");
        std::uint64_t key = (std::uint64_t(f->id) << 32) | static_cast<std::uint32_t>(s);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        bool v = compute(s, f);
        memo_[key] = v;
        return v;
    }

private:
    bool compute(int s, Formula f)
    {
        const WitnessState& st = mw_.states[static_cast<std::size_t>(s)];
        switch (f->kind) {
        case NodeKind::Bottom:
            return false;
        case NodeKind::Not:
            return !holds(s, f->lhs);
        case NodeKind::And:
            return holds(s, f->lhs) && holds(s, f->rhs);
        case NodeKind::Modal:
            break;
        }
        const ModalOperator& op = f->op;
        if (op.isAtom())
            return std::binary_search(st.atoms.begin(), st.atoms.end(), op.name);
        Formula arg = f->lhs;
        switch (mw_.kind) {
        case FrameKind::Kripke:
            if (op.kind != OpKind::Box)
                break;
            return std::all_of(st.successors.begin(), st.successors.end(), [&](int t) { return holds(t, arg); });
        case FrameKind::Neighbourhood: {
            if (op.kind != OpKind::Box)
                break;
            std::vector<int> truth;
            for (int t : st.support)
                if (holds(t, arg))
                    truth.push_back(t);
            for (const auto& n : st.neighbourhoods) {
                if (mw_.upwardClosed ? std::includes(truth.begin(), truth.end(), n.begin(), n.end()) : n == truth)
                    return true;
            }
            return false;
        }
        case FrameKind::Multigraph: {
            mpz_class inside = 0, total = 0;
            for (const auto& [t, w] : st.weights) {
                total += w;
                if (holds(t, arg))
                    inside += w;
            }
            if (op.kind == OpKind::Graded)
                return inside > mpz_class(op.grade);
            if (op.kind == OpKind::Majority)
                return inside >= total - inside;
            break;
        }
        case FrameKind::Distribution: {
            if (op.kind != OpKind::Prob)
                break;
            mpq_class mass = 0;
            for (const auto& [t, p] : st.probabilities)
                if (holds(t, arg))
                    mass += p;
            return mass >= op.prob;
        }
        case FrameKind::Game:
            if (op.kind != OpKind::Coalition)
                break;
            return coalitionForces(st.game, op.coalition, arg);
        }
        throw ModelError("operator " + operatorString(op) + " cannot be interpreted over a " + frameName(mw_.kind) + " frame");
    }

    // exists a joint choice for C such that every completion by the others leads to arg
    bool coalitionForces(const GameStructure& g, std::uint32_t c, Formula arg)
    {
        const std::size_t n = g.strategies.size();
        std::vector<int> inC, outC;
        for (std::size_t i = 0; i < n; ++i)
            ((c >> i) & 1 ? inC : outC).push_back(static_cast<int>(i));
        std::vector<int> profile(n, 0);
        auto profileIndex = [&] {
            std::size_t idx = 0, radix = 1;
            for (std::size_t i = 0; i < n; ++i) {
                idx += static_cast<std::size_t>(profile[i]) * radix;
                radix *= static_cast<std::size_t>(g.strategies[i]);
            }
            return idx;
        };
        auto advance = [&](const std::vector<int>& agents) {
            for (int a : agents) {
                if (++profile[static_cast<std::size_t>(a)] < g.strategies[static_cast<std::size_t>(a)])
                    return true;
                profile[static_cast<std::size_t>(a)] = 0;
            }
            return false;
        };
        do {
            for (int a : outC)
                profile[static_cast<std::size_t>(a)] = 0;
            bool all = true;
            do {
                std::size_t idx = profileIndex();
                if (idx >= g.outcomes.size())
                    throw ModelError("game outcome table too short");
                if (!holds(g.outcomes[idx], arg)) {
                    all = false;
                    break;
                }
            } while (advance(outC));
            if (all)
                return true;
        } while (advance(inC));
        return false;
    }

    const ModelWitness& mw_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

} // namespace

bool modelCheck(const ModelWitness& mw, int state, Formula f)
{
    Checker c(mw);
    return c.holds(state, f);
}

std::optional<std::string> witnessInvariantViolation(const ModelWitness& mw, const LogicConfig& cfg)
{
    const int n = static_cast<int>(mw.states.size());
    if (mw.kind != frameFor(cfg.logic))
        return "frame kind " + frameName(mw.kind) + " does not interpret logic " + cfg.name();
    if (mw.root < 0 || mw.root >= n)
        return std::string("root out of range");
    auto inRange = [&](int t) { return t >= 0 && t < n; };
    for (int s = 0; s < n; ++s) {
        const WitnessState& st = mw.states[static_cast<std::size_t>(s)];
        std::string where = "state " + std::to_string(s) + ": ";
        if (!std::is_sorted(st.atoms.begin(), st.atoms.end()))
            return where + "atom labels not sorted";
        switch (mw.kind) {
        case FrameKind::Kripke:
            if (!std::all_of(st.successors.begin(), st.successors.end(), inRange))
                return where + "successor out of range";
            if (cfg.logic == Logic::KD && st.successors.empty())
                return where + "no successor in a serial frame";
            break;
        case FrameKind::Multigraph:
            for (const auto& [t, w] : st.weights)
                if (!inRange(t) || w < 0)
                    return where + "bad weighted edge";
            break;
        case FrameKind::Distribution: {
            mpq_class sum = 0;
            for (const auto& [t, p] : st.probabilities) {
                if (!inRange(t) || p < 0)
                    return where + "bad probability entry";
                sum += p;
            }
            if (sum != 1)
                return where + "probabilities sum to " + sum.get_str();
            break;
        }
        case FrameKind::Neighbourhood:
            if (!std::is_sorted(st.support.begin(), st.support.end()) || !std::all_of(st.support.begin(), st.support.end(), inRange))
                return where + "bad support";
            if (mw.upwardClosed != (cfg.logic == Logic::M))
                return where + "upward closure flag does not match the logic";
            for (const auto& nb : st.neighbourhoods)
                if (!std::is_sorted(nb.begin(), nb.end()) ||
                    !std::includes(st.support.begin(), st.support.end(), nb.begin(), nb.end()))
                    return where + "neighbourhood not a sorted subset of the support";
            break;
        case FrameKind::Game: {
            if (static_cast<int>(st.game.strategies.size()) != mw.agents)
                return where + "strategy counts do not match the agent count";
            std::size_t profiles = 1;
            for (int k : st.game.strategies) {
                if (k < 1)
                    return where + "empty strategy set";
                profiles *= static_cast<std::size_t>(k);
            }
            if (st.game.outcomes.size() != profiles || !std::all_of(st.game.outcomes.begin(), st.game.outcomes.end(), inRange))
                return where + "bad outcome table";
            break;
        }
        }
    }
    return std::nullopt;
}

} // namespace cmlsat

#include "cmlsat/logic_config.hpp"

#include <algorithm>
#include <cctype>

namespace cmlsat {

LogicConfig LogicConfig::fromName(std::string_view name)
{
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    LogicConfig cfg;
    if (up == "E")
        cfg.logic = Logic::E;
    else if (up == "M")
        cfg.logic = Logic::M;
    else if (up == "K")
        cfg.logic = Logic::K;
    else if (up == "KD")
        cfg.logic = Logic::KD;
    else if (up == "GML")
        cfg.logic = Logic::GML;
    else if (up == "MAJ")
        cfg.logic = Logic::MAJ;
    else if (up == "PML")
        cfg.logic = Logic::PML;
    else if (up.rfind("COAL", 0) == 0) {
        cfg.logic = Logic::Coal;
        if (up.size() > 4) {
            if (up[4] != ':')
                throw ConfigError("unknown logic '" + std::string(name) + "'");
            try {
                std::size_t used = 0;
                cfg.agents = std::stoi(up.substr(5), &used);
                if (used != up.size() - 5)
                    throw ConfigError("bad agent count");
            } catch (const std::logic_error&) {
                throw ConfigError("bad agent count in '" + std::string(name) + "'");
            }
        }
        if (cfg.agents < 1 || cfg.agents > 16)
            throw ConfigError("agent count must be between 1 and 16");
    } else {
        throw ConfigError("unknown logic '" + std::string(name) + "'");
    }
    return cfg;
}

std::string LogicConfig::name() const
{
    switch (logic) {
    case Logic::E:
        return "E";
    case Logic::M:
        return "M";
    case Logic::K:
        return "K";
    case Logic::KD:
        return "KD";
    case Logic::Coal:
        return "COAL:" + std::to_string(agents);
    case Logic::GML:
        return "GML";
    case Logic::MAJ:
        return "MAJ";
    case Logic::PML:
        return "PML";
    }
    return "?";
}

bool LogicConfig::legal(const ModalOperator& op) const
{
    switch (op.kind) {
    case OpKind::Atom:
        return true;
    case OpKind::Box:
        return logic == Logic::E || logic == Logic::M || logic == Logic::K || logic == Logic::KD;
    case OpKind::Graded:
        return logic == Logic::GML || logic == Logic::MAJ;
    case OpKind::Majority:
        return logic == Logic::MAJ;
    case OpKind::Prob:
        return logic == Logic::PML && op.prob >= 0 && op.prob <= 1;
    case OpKind::Coalition:
        return logic == Logic::Coal && (op.coalition & ~grandCoalition()) == 0;
    }
    return false;
}

void checkLegal(Formula f, const LogicConfig& cfg)
{
    for (Formula g : subformulas(f))
        if (g->kind == NodeKind::Modal && !cfg.legal(g->op))
            throw ConfigError("operator " + operatorString(g->op) + " is not available in logic " + cfg.name());
}

} // namespace cmlsat

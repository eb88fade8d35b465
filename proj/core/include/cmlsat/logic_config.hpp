#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cmlsat/formula.hpp"

namespace cmlsat {

enum class Logic { E, M, K, KD, Coal, GML, MAJ, PML };

struct OracleBounds {
    int carrier = 3;
    int multiplicity = 4;
    int denominator = 12;
    int strategies = 2;
    long elementCap = 5'000'000;
};

struct LogicConfig {
    Logic logic = Logic::K;
    int agents = 2;
    long coeffBound = 64;
    int weightBound = 16;
    int truthTableLimit = 16;
    bool memoize = true;
    OracleBounds oracle;

    // Accepts E, M, K, KD, COAL:n, GML, MAJ, PML (case-insensitive).
    static LogicConfig fromName(std::string_view name);
    std::string name() const;

    bool arithmetic() const { return logic == Logic::GML || logic == Logic::MAJ || logic == Logic::PML; }
    bool legal(const ModalOperator& op) const;
    std::uint32_t grandCoalition() const { return agents >= 32 ? 0xffffffffu : ((1u << agents) - 1u); }
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws ConfigError naming the first operator not legal for cfg.
void checkLegal(Formula f, const LogicConfig& cfg);

} // namespace cmlsat

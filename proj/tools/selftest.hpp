#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmlsat/logic_config.hpp"
#include "cmlsat/onestep.hpp"

namespace cmlsat::selftest {

// Deterministic 64-bit generator (splitmix64); identical sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    bool coin() { return next() & 1; }

private:
    std::uint64_t state_;
};

ModalOperator sampleOperator(const LogicConfig& cfg, Rng& rng);

// Well-formed rule codes of the logic, as produced by matching random clauses.
std::vector<RuleCode> sampleCodes(const LogicConfig& cfg, std::uint64_t seed, std::size_t count);

struct ClosurePair {
    RuleCode first;
    std::size_t i;  // positive literal of first
    RuleCode second;
    std::size_t j;  // negative literal of second, same operator
};

std::vector<ClosurePair> sampleClosurePairs(const LogicConfig& cfg, std::uint64_t seed, std::size_t count);

// Soundness of sampled codes and, for arithmetic logics, resolution closure of sampled pairs.
nlohmann::json report(const LogicConfig& cfg, std::uint64_t seed, std::size_t samples, std::size_t pairs, bool& ok);

} // namespace cmlsat::selftest

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"

namespace cmlsat {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)), position(position)
    {
    }
    std::size_t position;
};

// Parses without checking operators against a logic.
Formula parseFormula(std::string_view text);
// Parses and rejects operators the logic does not declare (ConfigError).
Formula parse(std::string_view text, const LogicConfig& cfg);
// Parses a lone operator as printed by operatorString.
ModalOperator parseOperator(std::string_view text);

} // namespace cmlsat

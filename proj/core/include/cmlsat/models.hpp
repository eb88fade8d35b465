#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cmlsat/formula.hpp"
#include "cmlsat/logic_config.hpp"

namespace cmlsat {

enum class FrameKind { Kripke, Multigraph, Neighbourhood, Distribution, Game };

std::string frameName(FrameKind k);
FrameKind frameFromName(const std::string& name);
FrameKind frameFor(Logic logic);

// Strategy counts per agent and the outcome state of every profile (mixed radix, agent 1 fastest).
struct GameStructure {
    std::vector<int> strategies;
    std::vector<int> outcomes;
};

struct WitnessState {
    std::vector<std::string> atoms;                          // true atoms, sorted
    std::vector<int> successors;                             // Kripke
    std::vector<std::pair<int, mpz_class>> weights;          // Multigraph
    std::vector<std::pair<int, mpq_class>> probabilities;    // Distribution
    std::vector<int> support;                                // Neighbourhood: states the collection lives on
    std::vector<std::vector<int>> neighbourhoods;            // subsets of support, each sorted
    GameStructure game;                                      // Game
};

// A concrete finite coalgebra; the structure of each state is stored per frame kind.
struct ModelWitness {
    FrameKind kind = FrameKind::Kripke;
    bool upwardClosed = false;  // neighbourhood frames for monotone logic
    int agents = 0;
    int root = 0;
    std::vector<WitnessState> states;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact satisfaction x |= f; throws ModelError when an operator does not fit the frame.
bool modelCheck(const ModelWitness& mw, int state, Formula f);

// Seriality for KD, upward closure for M, distributions summing to one, index ranges.
std::optional<std::string> witnessInvariantViolation(const ModelWitness& mw, const LogicConfig& cfg);

} // namespace cmlsat

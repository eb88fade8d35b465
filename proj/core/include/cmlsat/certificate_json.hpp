#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "cmlsat/certificates.hpp"

namespace cmlsat {

class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json toJson(const RuleCode& code);
RuleCode ruleCodeFromJson(const nlohmann::json& j);
nlohmann::json toJson(const RuleMatching& m);
RuleMatching matchingFromJson(const nlohmann::json& j);

nlohmann::json toJson(const ShallowTableau& tb);
ShallowTableau tableauFromJson(const nlohmann::json& j);
nlohmann::json toJson(const ModelWitness& mw);
ModelWitness modelFromJson(const nlohmann::json& j);
nlohmann::json toJson(const ShallowProof& pf);
ShallowProof proofFromJson(const nlohmann::json& j);

std::string certificateKind(const Certificate& c);  // "tableau", "model" or "proof"

// A certificate for `formula` in a logic. Tableaux and models witness satisfiability of the
// formula, proofs witness its validity.
struct CertificateDocument {
    LogicConfig config;
    Formula formula = nullptr;
    Certificate certificate;
};

nlohmann::json toJson(const CertificateDocument& doc);
// Throws CertificateError on schema violations or unparsable formulas.
CertificateDocument documentFromJson(const nlohmann::json& j);

// nullopt when the certificate is correct, otherwise the first failed check.
std::optional<std::string> checkCertificate(const CertificateDocument& doc);

} // namespace cmlsat

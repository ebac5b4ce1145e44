#pragma once

#include "json.hpp"
#include "softprove/logic.hpp"
#include "softprove/prover.hpp"
#include "softprove/verifier.hpp"

namespace softprove {

nlohmann::json rule_to_json(const Rule& rule);
nlohmann::json proof_step_to_json(const ProofStep& step);
nlohmann::json proof_to_json(const ProofResult& result);
nlohmann::json hypothesis_to_json(const InferredHypothesis& h);
nlohmann::json outcome_to_json(const VerificationOutcome& outcome);
nlohmann::json metrics_row_to_json(const MetricsRow& row);
nlohmann::json metrics_to_json(const MetricsReport& report);

nlohmann::json case_to_json(const EthicalCase& c);
/// Reads {id, statement?, frame, facts, hypothesis, gold_violation?,
/// manual_invalid_class?}. `statement` defaults to the frame's. Throws
/// SchemaError listing every problem.
EthicalCase case_from_json(const nlohmann::json& doc);

}  // namespace softprove

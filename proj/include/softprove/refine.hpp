#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "softprove/chat_client.hpp"
#include "softprove/embeddings.hpp"
#include "softprove/prompts.hpp"
#include "softprove/prover.hpp"
#include "softprove/ruleparse.hpp"
#include "softprove/srl.hpp"
#include "softprove/verifier.hpp"

namespace softprove {

// ---- reply parsing ---------------------------------------------------------

/// Splits a premise block into sentences: one per line, and lines holding
/// several sentences are split after `.`, `!` or `?` followed by a capital.
/// Bullets and `1.` style numbering are stripped.
std::vector<std::string> split_premises(std::string_view block);

struct ExplanationReply {
  std::vector<std::string> premises;
  std::string hypothesis_label;
};

/// Requires a `Premises:` section and a `Hypothesis:` line. Throws ParseFailure.
ExplanationReply parse_explanation_reply(std::string_view reply);

/// The first foundation name appearing as a word in `label`, e.g.
/// "Violate the norm of authority" -> Authority. Throws UnknownViolation.
MoralViolation parse_hypothesis_label(std::string_view label);

struct RulesReply {
  std::vector<Rule> rules;
  std::vector<std::string> bad_lines;
};

/// One clause per line; blank lines, code fences and `%` lines are skipped.
RulesReply parse_rules_reply(std::string_view reply);

// ---- LLM-backed operations -------------------------------------------------

/// Issues `f<n>` fact ids, continuing across iterations.
class FactNumbering {
 public:
  explicit FactNumbering(int next = 1) : next_(next) {}
  std::string next() { return "f" + std::to_string(next_++); }
  /// Moves past every `f<n>` id in `facts`.
  void observe(std::span<const NlFact> facts);

 private:
  int next_;
};

struct SemanticResult {
  std::vector<NlFact> facts;
  MoralViolation hypothesis = MoralViolation::Care;
};

/// Throws ParseFailure after one re-ask, UnknownViolation, ClientError.
SemanticResult semantic_inference(const SemanticFrame& frame, ChatClient& client,
                                  const ChatParams& params, FactNumbering& ids);

struct Autoformalization {
  std::vector<Rule> rules;
  std::vector<std::string> warnings;
};

/// One request per fact. Rules get origin GeneratedFact(fact id) and ids
/// `<fact id>_r<n>`. Malformed lines cause one re-ask and are then dropped
/// with a warning. Throws AutoformalizationEmpty when nothing parses.
Autoformalization autoformalize(std::span<const NlFact> facts, const SemanticFrame& frame,
                                ChatClient& client, const ChatParams& params);

/// New premises for `hypothesis` given the facts kept from the last proof.
/// Replies matching an existing fact (case-insensitive) are dropped.
std::vector<NlFact> abductive_inference(std::span<const NlFact> kept_facts,
                                        std::span<const NlFact> existing_facts,
                                        MoralViolation hypothesis, const SemanticFrame& frame,
                                        ChatClient& client, const ChatParams& params,
                                        FactNumbering& ids);

MoralViolation deductive_inference(std::span<const NlFact> facts, ChatClient& client,
                                   const ChatParams& params);

// ---- loop ------------------------------------------------------------------

struct RefineConfig {
  int max_iterations = 3;
  SolverConfig solver;
  /// Principle rules and goal declarations.
  RuleDocument library;
  bool open_goals = false;
  ChatParams params;
};

struct Exchange {
  std::string purpose;
  std::string prompt;
  std::string response;
};

struct IterationRecord {
  int iteration = 0;
  std::vector<NlFact> explanation;
  MoralViolation hypothesis = MoralViolation::Care;
  /// Every rule of the knowledge base, serialized.
  std::string kb_snapshot;
  VerificationOutcome outcome;
  std::vector<NlFact> added_facts;
  std::set<std::string> pruned_fact_ids;
  std::vector<std::string> warnings;
  std::vector<Exchange> exchanges;
  /// Re-check of a pruned explanation; no LLM calls were made for it.
  bool confirmation = false;
};

struct RefineTrace {
  std::vector<IterationRecord> iterations;
  /// Set when an LLM call failed; earlier iterations are kept.
  std::optional<std::string> error;
};

struct RefineResult {
  EthicalCase final_case;
  RefineTrace trace;
  std::size_t solver_calls = 0;
  std::size_t abduction_calls = 0;
};

/// Starting point. Facts and hypothesis are produced by semantic inference
/// when `nl_facts` is empty; `formalized` pre-seeds autoformalization by fact id.
struct RefineSeed {
  EthicalCase base;
  std::map<std::string, std::vector<Rule>> formalized;
};

/// Verify, and while the explanation is invalid, repair it by abduction and
/// deductive revision, at most `max_iterations` times. A valid but redundant
/// explanation is pruned to the facts in its proof and re-checked.
RefineResult refine_loop(const RefineSeed& seed, const RefineConfig& config, ChatClient& client,
                         const EmbeddingStore& store);

nlohmann::json trace_to_json(const RefineResult& result);

}  // namespace softprove

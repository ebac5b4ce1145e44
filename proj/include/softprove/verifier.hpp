#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "softprove/embeddings.hpp"
#include "softprove/logic.hpp"
#include "softprove/prover.hpp"
#include "softprove/ruleparse.hpp"
#include "softprove/srl.hpp"

namespace softprove {

enum class InvalidClass { MissingPlausiblePremise, NoDiscernibleArgument };

std::string_view to_string(InvalidClass c);
std::optional<InvalidClass> parse_invalid_class(std::string_view text);

struct NlFact {
  std::string id;
  std::string text;

  friend bool operator==(const NlFact&, const NlFact&) = default;
};

struct EthicalCase {
  std::string id;
  std::string statement;
  SemanticFrame frame;
  std::vector<NlFact> nl_facts;
  MoralViolation hypothesis = MoralViolation::Care;
  std::optional<MoralViolation> gold_violation;
  /// Human annotation only; never computed.
  std::optional<InvalidClass> manual_invalid_class;

  std::set<std::string> fact_ids() const;
};

enum class OutcomeKind { ValidNonRedundant, ValidRedundant, InvalidMismatch, InvalidNoProof };

std::string_view to_string(OutcomeKind kind);

struct VerificationOutcome {
  OutcomeKind kind = OutcomeKind::InvalidNoProof;
  /// Non-empty exactly for ValidRedundant.
  std::set<std::string> unused_fact_ids;
  /// Foundation of the proved goal; set whenever a proof exists.
  std::optional<MoralViolation> entailed;
  std::optional<InferredHypothesis> proof;

  bool valid() const {
    return kind == OutcomeKind::ValidNonRedundant || kind == OutcomeKind::ValidRedundant;
  }
};

/// Goal with every argument replaced by a fresh variable A1, A2, ...
GoalSpec open_goal(const GoalSpec& goal);

/// Principles and goals of `library`, then SRL facts, then generated rules.
/// With `open_goals` the goal arguments are variables instead of constants.
KnowledgeBase assemble_kb(const RuleDocument& library, std::span<const Rule> srl_facts,
                          std::span<const Rule> generated, bool open_goals = false);

/// Proves the KB's goal disjunction and classifies the case's explanation.
/// Throws ConfigError when the KB declares no goals.
VerificationOutcome verify_case(const EthicalCase& c, const KnowledgeBase& kb,
                                const EmbeddingStore& store, const SolverConfig& config);

/// Percentages are kept in tenths so rounding is exact and reproducible.
struct MetricsRow {
  std::size_t total = 0;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  std::size_t non_redundant = 0;
  std::size_t redundant = 0;

  /// Over all outcomes.
  int valid_tenths() const;
  int invalid_tenths() const;
  /// Within the valid subset.
  int non_redundant_tenths() const;
  int redundant_tenths() const;
};

/// Round-half-up of 1000 * part / whole; 0 when whole is 0.
int percent_tenths(std::size_t part, std::size_t whole);
/// "65.1"
std::string format_tenths(int tenths);

struct MetricsReport {
  bool empty = true;
  MetricsRow overall;
  std::map<int, MetricsRow> per_iteration;
};

MetricsReport aggregate_metrics(std::span<const std::pair<int, OutcomeKind>> outcomes);

/// Aligned table; columns Valid, Invalid, Valid and non-Redundant, Valid but
/// Redundant, one row per iteration.
std::string render_metrics_table(const MetricsReport& report, const std::string& title = {});

}  // namespace softprove

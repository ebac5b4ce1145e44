#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "softprove/embeddings.hpp"
#include "softprove/logic.hpp"

namespace softprove {

enum class Aggregation { Product };

struct SolverConfig {
  double unify_threshold = 0.5;
  double proof_threshold = 0.13;
  int max_depth = 10;
  std::size_t max_proofs_per_goal = 10000;
  Aggregation aggregation = Aggregation::Product;
  /// Accept a proof only when its score is strictly above proof_threshold.
  bool strict_threshold = false;
  /// Score mismatched constants by embedding similarity instead of failing.
  bool weak_constants = false;
  /// Cut partial proofs that fall below the threshold or the best score so
  /// far. Never changes the returned proof, only the work done.
  bool prune = true;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  bool accepts(double proof_score) const;
};

/// One rule application: the (substituted) goal it resolved, and the proofs
/// of the rule's body atoms in order.
struct ProofStep {
  Atom goal;
  std::string rule_id;
  double unification_score = 1.0;
  double rule_score = 1.0;
  std::vector<ProofStep> children;

  std::size_t size() const;
  std::size_t depth() const;
};

struct ProofResult {
  std::optional<MoralViolation> violation;
  Atom goal;
  ProofStep proof;
  double proof_score = 0.0;
  std::set<std::string> used_rule_ids;
  /// Fully resolved bindings of every variable bound in the proof.
  Substitution bindings;
  /// Enumeration stopped at max_proofs_per_goal; the proof may not be optimal.
  bool budget_exceeded = false;
  std::size_t proofs_enumerated = 0;
};

/// Product, in pre-order, of each step's unification score and rule score.
double recompute_proof_score(const ProofStep& root);

struct InferredHypothesis {
  std::optional<MoralViolation> violation;
  std::size_t goal_index = 0;
  ProofResult result;
  /// Indices of goals whose search hit the proof budget.
  std::vector<std::size_t> budget_exceeded_goals;
};

/// Unifies goal `a` with rule head `b` under `theta`. Predicates are matched by
/// weak_unify_score and must reach the unify threshold; constants must be equal
/// unless `weak_constants` is set. Returns the extended substitution and the
/// unification score, or nothing.
std::optional<std::pair<Substitution, double>> weak_unify_atoms(const Atom& a, const Atom& b,
                                                                const Substitution& theta,
                                                                const EmbeddingStore& store,
                                                                const SolverConfig& config);

/// Depth-limited backward chaining over one knowledge base. Holds a similarity
/// cache, so one instance must not be shared between threads.
class Prover {
 public:
  Prover(const KnowledgeBase& kb, const EmbeddingStore& store, SolverConfig config = {});
  ~Prover();
  Prover(Prover&&) noexcept;
  Prover& operator=(Prover&&) = delete;

  /// Best proof of `goal` whose score clears the proof threshold. Ties go to
  /// fewer steps, then to the lexicographically smaller sorted rule-id list.
  std::optional<ProofResult> prove(const GoalSpec& goal);

  /// Best proof over all goals; ties go to the earlier goal.
  std::optional<InferredHypothesis> prove_all(std::span<const GoalSpec> goals);

  struct Impl;  ///< opaque outside prover.cpp

 private:
  std::unique_ptr<Impl> impl_;
};

std::optional<ProofResult> prove_goal(const KnowledgeBase& kb, const GoalSpec& goal,
                                      const EmbeddingStore& store, const SolverConfig& config);

std::optional<InferredHypothesis> prove_all_goals(const KnowledgeBase& kb,
                                                  std::span<const GoalSpec> goals,
                                                  const EmbeddingStore& store,
                                                  const SolverConfig& config);

/// Fact ids of the GeneratedFact rules used anywhere in the proof.
std::set<std::string> facts_in_proof(const ProofResult& result, const KnowledgeBase& kb);

/// Indented tree: `<score> <goal predicate>` then one line per rule
/// application, two spaces of indentation per depth.
std::string render_proof(const ProofResult& result);

}  // namespace softprove

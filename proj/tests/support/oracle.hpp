#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "softprove/embeddings.hpp"
#include "softprove/logic.hpp"

namespace oracle {

struct Best {
  double score = 0.0;
  std::size_t steps = 0;
  std::vector<std::string> rule_ids;  ///< sorted, unique
};

struct Stats {
  std::size_t states = 0;
  std::size_t proofs = 0;
  bool truncated = false;  ///< state_cap was hit; the answer is not trustworthy
};

// Breadth-first enumeration of every proof of `goal`, on its own term
// representation. States whose score fell below the proof threshold are
// dropped, which loses nothing since every factor is at most 1.
std::optional<Best> best_proof(const softprove::KnowledgeBase& kb, const softprove::Atom& goal,
                               const softprove::EmbeddingStore& store, double unify_threshold,
                               double proof_threshold, int max_depth, std::size_t state_cap,
                               Stats& stats);

}  // namespace oracle

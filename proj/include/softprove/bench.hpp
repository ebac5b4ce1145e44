#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "softprove/embeddings.hpp"
#include "softprove/logic.hpp"
#include "softprove/prover.hpp"

namespace softprove {

struct SyntheticKb {
  KnowledgeBase kb;
  EmbeddingStore store{1};
};

/// `rule_count` rules and facts: one goal with a complete proof chain, goals
/// whose chains dead-end, alternatives that match weakly but lose, and random
/// distractor rules. Predicates come in clusters of similar vectors so weak
/// unification branches. Deterministic in `seed`.
SyntheticKb make_synthetic_kb(std::size_t rule_count, std::uint64_t seed);

struct BenchReport {
  std::size_t rule_count = 0;
  std::vector<double> seconds;
  double median_seconds = 0.0;
  bool proved = false;
};

BenchReport run_bench(std::size_t rule_count, std::uint64_t seed, const SolverConfig& config,
                      int runs = 10);

}  // namespace softprove

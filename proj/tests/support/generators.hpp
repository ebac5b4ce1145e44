#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "softprove/embeddings.hpp"
#include "softprove/logic.hpp"
#include "softprove/ruleparse.hpp"

namespace gen {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);  // inclusive
double uniform_real(Rng& rng, double lo, double hi);
bool chance(Rng& rng, double p);

std::string symbol(Rng& rng);    // [a-z][a-z0-9_]{0,7}
std::string variable(Rng& rng);  // [A-Z][A-Za-z0-9_]{0,5}
softprove::Term term(Rng& rng, double var_prob = 0.5);
softprove::Atom atom(Rng& rng, int max_arity = 3);

/// Score with at most 6 fractional digits in (0, 1].
double score(Rng& rng);

/// Random valid document with mixed origins and an optional goal line.
softprove::RuleDocument document(Rng& rng);

/// Small vocabulary whose vectors come in clusters, so predicate pairs span
/// the whole similarity range around the unify threshold.
struct World {
  std::vector<std::string> predicates;
  std::vector<std::string> constants;
  softprove::EmbeddingStore store{8};
};
World world(Rng& rng);

struct RandomKb {
  softprove::KnowledgeBase kb;
  softprove::GoalSpec goal;
};

/// 1..max_rules rules of arity <= 2 with scores in [0.5, 1], bodies of up to
/// two atoms, over `w`'s vocabulary.
RandomKb random_kb(Rng& rng, const World& w, int max_rules = 8);

softprove::Substitution substitution(Rng& rng, const std::vector<std::string>& vars,
                                     const std::vector<std::string>& constants);

}  // namespace gen

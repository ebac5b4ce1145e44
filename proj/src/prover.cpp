#include "softprove/prover.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include "softprove/errors.hpp"

namespace softprove {

void SolverConfig::validate() const {
  if (!(unify_threshold > 0.0 && unify_threshold <= 1.0))
    throw ConfigError("unify_threshold must be in (0, 1]");
  if (!(proof_threshold > 0.0 && proof_threshold <= 1.0))
    throw ConfigError("proof_threshold must be in (0, 1]");
  if (max_depth < 1) throw ConfigError("max_depth must be at least 1");
  if (max_proofs_per_goal < 1) throw ConfigError("max_proofs_per_goal must be at least 1");
}

bool SolverConfig::accepts(double proof_score) const {
  return strict_threshold ? proof_score > proof_threshold : proof_score >= proof_threshold;
}

std::size_t ProofStep::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t ProofStep::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

double recompute_proof_score(const ProofStep& root) {
  double score = 1.0;
  std::function<void(const ProofStep&)> walk = [&](const ProofStep& step) {
    score = score * step.unification_score;
    score = score * step.rule_score;
    for (const auto& c : step.children) walk(c);
  };
  walk(root);
  return score;
}

std::optional<std::pair<Substitution, double>> weak_unify_atoms(const Atom& a, const Atom& b,
                                                                const Substitution& theta,
                                                                const EmbeddingStore& store,
                                                                const SolverConfig& config) {
  if (a.arity() != b.arity()) return std::nullopt;
  double score = a.predicate == b.predicate ? 1.0
                                            : weak_unify_score(store, a.predicate, b.predicate);
  if (score < config.unify_threshold) return std::nullopt;
  Substitution out = theta;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Term ta = apply_substitution(a.args[i], out);
    Term tb = apply_substitution(b.args[i], out);
    if (ta == tb) continue;
    if (ta.is_variable()) {
      out = compose(out, Substitution{{ta.name(), tb}});
    } else if (tb.is_variable()) {
      out = compose(out, Substitution{{tb.name(), ta}});
    } else {
      if (!config.weak_constants) return std::nullopt;
      double s = weak_unify_score(store, ta.name(), tb.name());
      if (s < config.unify_threshold) return std::nullopt;
      score *= s;
    }
  }
  return std::make_pair(std::move(out), score);
}

namespace {

constexpr std::int32_t kUnbound = std::numeric_limits<std::int32_t>::min();

bool is_var(std::int32_t code) { return code < 0; }
std::int32_t var_code(std::int32_t slot) { return -(slot + 1); }
std::int32_t slot_of(std::int32_t code) { return -code - 1; }

// Arguments hold a symbol id (>= 0) or a rule-local variable -(index + 1).
struct CompiledAtom {
  std::int32_t pred = 0;
  std::uint8_t arity = 0;
  std::array<std::int32_t, kMaxArity> args{};
};

struct CompiledRule {
  CompiledAtom head;
  std::vector<CompiledAtom> body;
  double score = 1.0;
  std::vector<std::string> var_names;
};

struct Candidate {
  std::uint32_t rule;
  double score;
};

}  // namespace

struct Prover::Impl {
  const KnowledgeBase& kb;
  SolverConfig config;
  SimilarityCache similarity;
  std::vector<std::string> symbols;
  std::unordered_map<std::string, std::int32_t> symbol_ids;
  std::vector<CompiledRule> rules;
  std::map<std::pair<std::int32_t, int>, std::vector<std::uint32_t>> head_groups;
  std::unordered_map<std::int64_t, std::vector<Candidate>> candidate_cache;

  Impl(const KnowledgeBase& kb_, const EmbeddingStore& store, SolverConfig config_)
      : kb(kb_), config(config_), similarity(store) {
    config.validate();
    rules.reserve(kb.rules().size());
    for (std::uint32_t i = 0; i < kb.rules().size(); ++i) {
      const Rule& r = kb.rules()[i];
      CompiledRule cr;
      cr.head = compile(r.head, cr.var_names);
      for (const Atom& a : r.body) cr.body.push_back(compile(a, cr.var_names));
      cr.score = r.score;
      head_groups[{cr.head.pred, cr.head.arity}].push_back(i);
      rules.push_back(std::move(cr));
    }
  }

  std::int32_t intern(const std::string& name) {
    auto [it, inserted] = symbol_ids.emplace(name, static_cast<std::int32_t>(symbols.size()));
    if (inserted) symbols.push_back(name);
    return it->second;
  }

  CompiledAtom compile(const Atom& atom, std::vector<std::string>& var_names) {
    if (atom.arity() == 0 || atom.arity() > kMaxArity)
      throw ConfigError("atom arity out of range: " + to_string(atom));
    CompiledAtom out;
    out.pred = intern(atom.predicate);
    out.arity = static_cast<std::uint8_t>(atom.arity());
    for (std::size_t i = 0; i < atom.arity(); ++i) {
      const Term& t = atom.args[i];
      if (t.is_constant()) {
        out.args[i] = intern(t.name());
      } else {
        auto it = std::find(var_names.begin(), var_names.end(), t.name());
        std::size_t idx = static_cast<std::size_t>(it - var_names.begin());
        if (it == var_names.end()) var_names.push_back(t.name());
        out.args[i] = -static_cast<std::int32_t>(idx + 1);
      }
    }
    return out;
  }

  const std::vector<Candidate>& candidates(std::int32_t pred, int arity) {
    const std::int64_t key = (static_cast<std::int64_t>(pred) << 8) | arity;
    auto found = candidate_cache.find(key);
    if (found != candidate_cache.end()) return found->second;
    std::vector<Candidate> out;
    for (const auto& [group, members] : head_groups) {
      if (group.second != arity) continue;
      double s = group.first == pred ? 1.0 : similarity.score(symbols[pred], symbols[group.first]);
      if (s < config.unify_threshold) continue;
      for (std::uint32_t r : members) out.push_back({r, s});
    }
    // Strongest matches first so the best-score bound tightens early.
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate& x, const Candidate& y) { return x.score > y.score; });
    return candidate_cache.emplace(key, std::move(out)).first->second;
  }
};

namespace {

class Search {
 public:
  Search(Prover::Impl& impl, const GoalSpec& goal) : impl_(impl), goal_(goal) {
    root_ = impl_.compile(goal.goal_atom, root_vars_);
    cells_.assign(root_vars_.size(), kUnbound);
    for (std::size_t i = 0; i < root_vars_.size(); ++i) slot_owner_.push_back({-1, static_cast<int>(i)});
  }

  std::optional<ProofResult> run() {
    pending_.push_back({&root_, 0, 1, -1});
    solve(1.0);
    if (!have_best_) return std::nullopt;
    best_.budget_exceeded = exceeded_;
    best_.proofs_enumerated = enumerated_;
    return std::move(best_);
  }

 private:
  struct Pending {
    const CompiledAtom* atom;
    std::int32_t frame;
    int depth;
    int parent;
  };
  struct StepRecord {
    const CompiledAtom* atom;
    std::int32_t frame;
    std::uint32_t rule;
    double unification;
    int parent;
  };

  std::int32_t code_in(std::int32_t arg, std::int32_t frame) const {
    return arg >= 0 ? arg : var_code(frame + slot_of(arg));
  }

  std::int32_t deref(std::int32_t code) const {
    while (is_var(code)) {
      std::int32_t v = cells_[static_cast<std::size_t>(slot_of(code))];
      if (v == kUnbound) return code;
      code = v;
    }
    return code;
  }

  void bind(std::int32_t var, std::int32_t value) {
    cells_[static_cast<std::size_t>(slot_of(var))] = value;
    trail_.push_back(slot_of(var));
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      cells_[static_cast<std::size_t>(trail_.back())] = kUnbound;
      trail_.pop_back();
    }
  }

  bool unify_args(const Pending& goal, const CompiledAtom& head, std::int32_t head_frame,
                  double& unification) {
    for (std::size_t i = 0; i < head.arity; ++i) {
      std::int32_t a = deref(code_in(goal.atom->args[i], goal.frame));
      std::int32_t b = deref(code_in(head.args[i], head_frame));
      if (a == b) continue;
      if (is_var(a)) {
        bind(a, b);
      } else if (is_var(b)) {
        bind(b, a);
      } else {
        if (!impl_.config.weak_constants) return false;
        double s = impl_.similarity.score(impl_.symbols[static_cast<std::size_t>(a)],
                                          impl_.symbols[static_cast<std::size_t>(b)]);
        if (s < impl_.config.unify_threshold) return false;
        unification *= s;
      }
    }
    return true;
  }

  bool pruned(double score) const {
    const SolverConfig& cfg = impl_.config;
    if (!cfg.prune) return false;
    if (!cfg.accepts(score)) return true;
    return have_best_ && score < best_score_;
  }

  void solve(double score) {
    if (stop_) return;
    if (pending_.empty()) {
      complete(score);
      return;
    }
    const Pending goal = pending_.back();
    pending_.pop_back();
    const auto& cands = impl_.candidates(goal.atom->pred, goal.atom->arity);
    for (const Candidate& cand : cands) {
      const CompiledRule& rule = impl_.rules[cand.rule];
      if (!rule.body.empty() && goal.depth + 1 > impl_.config.max_depth) continue;
      const std::size_t mark = trail_.size();
      const std::int32_t frame = static_cast<std::int32_t>(cells_.size());
      cells_.resize(cells_.size() + rule.var_names.size(), kUnbound);
      for (std::size_t v = 0; v < rule.var_names.size(); ++v)
        slot_owner_.push_back({static_cast<int>(cand.rule), static_cast<int>(v)});
      double unification = cand.score;
      if (unify_args(goal, rule.head, frame, unification)) {
        double next = score * unification;
        next = next * rule.score;
        if (!pruned(next)) {
          steps_.push_back({goal.atom, goal.frame, cand.rule, unification, goal.parent});
          const int me = static_cast<int>(steps_.size()) - 1;
          const std::size_t depth_mark = pending_.size();
          for (auto it = rule.body.rbegin(); it != rule.body.rend(); ++it)
            pending_.push_back({&*it, frame, goal.depth + 1, me});
          solve(next);
          pending_.resize(depth_mark);
          steps_.pop_back();
        }
      }
      undo(mark);
      cells_.resize(static_cast<std::size_t>(frame));
      slot_owner_.resize(static_cast<std::size_t>(frame));
      if (stop_) break;
    }
    pending_.push_back(goal);
  }

  std::vector<std::string> sorted_rule_ids() const {
    std::set<std::string> ids;
    for (const auto& s : steps_) ids.insert(impl_.kb.rules()[s.rule].id);
    return {ids.begin(), ids.end()};
  }

  void complete(double score) {
    if (!impl_.config.accepts(score)) return;
    if (enumerated_ >= impl_.config.max_proofs_per_goal) {
      exceeded_ = true;
      stop_ = true;
      return;
    }
    ++enumerated_;
    std::vector<std::string> ids;
    if (have_best_) {
      if (score < best_score_) return;
      if (score == best_score_) {
        if (steps_.size() > best_steps_) return;
        if (steps_.size() == best_steps_) {
          ids = sorted_rule_ids();
          if (!(ids < best_ids_)) return;
        }
      }
    }
    if (ids.empty()) ids = sorted_rule_ids();
    have_best_ = true;
    best_score_ = score;
    best_steps_ = steps_.size();
    best_ids_ = ids;
    best_ = materialize(score);
  }

  Term resolve(std::int32_t code) const {
    code = deref(code);
    if (!is_var(code)) return Term::constant(impl_.symbols[static_cast<std::size_t>(code)]);
    const std::int32_t slot = slot_of(code);
    const auto [rule, local] = slot_owner_[static_cast<std::size_t>(slot)];
    if (rule < 0) return Term::variable(root_vars_[static_cast<std::size_t>(local)]);
    return Term::variable(impl_.rules[static_cast<std::size_t>(rule)].var_names[static_cast<std::size_t>(local)] +
                          "_" + std::to_string(slot));
  }

  Atom resolve_atom(const CompiledAtom& atom, std::int32_t frame) const {
    Atom out{impl_.symbols[static_cast<std::size_t>(atom.pred)], {}};
    for (std::size_t i = 0; i < atom.arity; ++i) out.args.push_back(resolve(code_in(atom.args[i], frame)));
    return out;
  }

  ProofResult materialize(double score) const {
    ProofResult result;
    result.violation = goal_.violation;
    result.goal = goal_.goal_atom;
    result.proof_score = score;
    std::vector<std::vector<std::size_t>> children(steps_.size());
    for (std::size_t i = 1; i < steps_.size(); ++i)
      children[static_cast<std::size_t>(steps_[i].parent)].push_back(i);
    std::function<ProofStep(std::size_t)> build = [&](std::size_t i) {
      const StepRecord& rec = steps_[i];
      const Rule& rule = impl_.kb.rules()[rec.rule];
      ProofStep step{resolve_atom(*rec.atom, rec.frame), rule.id, rec.unification, rule.score, {}};
      for (std::size_t c : children[i]) step.children.push_back(build(c));
      return step;
    };
    result.proof = build(0);
    for (const auto& s : steps_) result.used_rule_ids.insert(impl_.kb.rules()[s.rule].id);
    for (std::size_t slot = 0; slot < cells_.size(); ++slot) {
      if (cells_[slot] == kUnbound) continue;
      Term image = resolve(var_code(static_cast<std::int32_t>(slot)));
      const auto [rule, local] = slot_owner_[slot];
      std::string name = rule < 0 ? root_vars_[static_cast<std::size_t>(local)]
                                  : impl_.rules[static_cast<std::size_t>(rule)].var_names[static_cast<std::size_t>(local)] +
                                        "_" + std::to_string(slot);
      if (image.is_variable() && image.name() == name) continue;
      result.bindings.bind(name, image);
    }
    return result;
  }

  Prover::Impl& impl_;
  const GoalSpec& goal_;
  std::vector<std::string> root_vars_;
  CompiledAtom root_;
  std::vector<std::int32_t> cells_;
  std::vector<std::pair<int, int>> slot_owner_;
  std::vector<std::int32_t> trail_;
  std::vector<Pending> pending_;
  std::vector<StepRecord> steps_;

  bool have_best_ = false;
  double best_score_ = 0.0;
  std::size_t best_steps_ = 0;
  std::vector<std::string> best_ids_;
  ProofResult best_;
  std::size_t enumerated_ = 0;
  bool exceeded_ = false;
  bool stop_ = false;
};

}  // namespace

Prover::Prover(const KnowledgeBase& kb, const EmbeddingStore& store, SolverConfig config)
    : impl_(std::make_unique<Impl>(kb, store, config)) {}

Prover::~Prover() = default;
Prover::Prover(Prover&&) noexcept = default;

std::optional<ProofResult> Prover::prove(const GoalSpec& goal) {
  return Search(*impl_, goal).run();
}

std::optional<InferredHypothesis> Prover::prove_all(std::span<const GoalSpec> goals) {
  std::optional<InferredHypothesis> best;
  std::vector<std::size_t> exceeded;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    auto result = prove(goals[i]);
    if (!result) continue;
    if (result->budget_exceeded) exceeded.push_back(i);
    if (!best || result->proof_score > best->result.proof_score) {
      best = InferredHypothesis{result->violation, i, std::move(*result), {}};
    }
  }
  if (best) best->budget_exceeded_goals = std::move(exceeded);
  return best;
}

std::optional<ProofResult> prove_goal(const KnowledgeBase& kb, const GoalSpec& goal,
                                      const EmbeddingStore& store, const SolverConfig& config) {
  return Prover(kb, store, config).prove(goal);
}

std::optional<InferredHypothesis> prove_all_goals(const KnowledgeBase& kb,
                                                  std::span<const GoalSpec> goals,
                                                  const EmbeddingStore& store,
                                                  const SolverConfig& config) {
  return Prover(kb, store, config).prove_all(goals);
}

std::set<std::string> facts_in_proof(const ProofResult& result, const KnowledgeBase& kb) {
  std::set<std::string> facts;
  for (const auto& id : result.used_rule_ids) {
    const Rule* rule = kb.find(id);
    if (rule && rule->origin.kind == RuleOrigin::Kind::GeneratedFact)
      facts.insert(rule->origin.fact_id);
  }
  return facts;
}

namespace {

std::string fixed5(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5f", x);
  return buf;
}

void render_step(const ProofStep& step, std::size_t depth, std::string& out) {
  out.append(2 * depth, ' ');
  out += to_string(step.goal);
  out += " <= ";
  out += step.rule_id;
  out += " [unify ";
  out += fixed5(step.unification_score);
  out += ", rule ";
  out += format_score(step.rule_score);
  out += "]\n";
  for (const auto& c : step.children) render_step(c, depth + 1, out);
}

}  // namespace

std::string render_proof(const ProofResult& result) {
  std::string out = fixed5(result.proof_score) + " " + result.goal.predicate + "\n";
  render_step(result.proof, 1, out);
  return out;
}

}  // namespace softprove

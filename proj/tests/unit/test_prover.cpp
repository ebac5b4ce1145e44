#include "doctest.h"

#include <cmath>
#include <string>

#include "generators.hpp"
#include "oracle.hpp"
#include "softprove/corpus.hpp"
#include "softprove/errors.hpp"
#include "softprove/principles.hpp"
#include "softprove/prover.hpp"
#include "softprove/ruleparse.hpp"
#include "softprove/srl.hpp"
#include "softprove/verifier.hpp"

using namespace softprove;

namespace {

const std::string kData = SOFTPROVE_DATA_DIR;

Atom atom(std::string p, std::vector<Term> args) { return Atom{std::move(p), std::move(args)}; }
Term V(const char* n) { return Term::variable(n); }
Term C(const char* n) { return Term::constant(n); }

const EmbeddingStore& fixture() {
  static const EmbeddingStore store = load_embeddings_file(kData + "/embeddings/fixture-64d.txt");
  return store;
}

KnowledgeBase kb_of(const std::string& text) { return to_knowledge_base(parse_kb(text)); }

GoalSpec goal_of(const std::string& text) {
  Rule r = parse_rule(text + ".");
  return make_goal(r.head);
}

KnowledgeBase frog_kb() {
  CaseFile cf = load_case_file(kData + "/cases/frog.case.json");
  std::vector<Rule> generated;
  for (const auto& [id, rules] : cf.formalized) generated.insert(generated.end(), rules.begin(), rules.end());
  return assemble_kb(parse_principles(default_principles_text()), frame_to_facts(cf.ethical_case.frame),
                     generated);
}

KnowledgeBase chain_kb(int rules_with_body) {
  std::string text;
  for (int i = 0; i < rules_with_body; ++i)
    text += "p" + std::to_string(i) + "(X) :- p" + std::to_string(i + 1) + "(X).\n";
  text += "p" + std::to_string(rules_with_body) + "(a).\n";
  return kb_of(text);
}

bool same_answer(const std::optional<ProofResult>& a, const std::optional<ProofResult>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->proof_score == b->proof_score && a->proof.size() == b->proof.size() &&
         a->used_rule_ids == b->used_rule_ids;
}

void check_sound(const ProofStep& step, const KnowledgeBase& kb, const SolverConfig& config) {
  const Rule* rule = kb.find(step.rule_id);
  REQUIRE(rule != nullptr);
  CHECK(step.rule_score == rule->score);
  CHECK(step.unification_score >= config.unify_threshold);
  CHECK(step.unification_score <= 1.0);
  CHECK(step.children.size() == rule->body.size());
  CHECK(step.goal.arity() == rule->head.arity());
  for (const auto& c : step.children) check_sound(c, kb, config);
}

}  // namespace

TEST_CASE("solver configuration") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.accepts(0.13));
  c.strict_threshold = true;
  CHECK_FALSE(c.accepts(0.13));
  c.max_depth = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.unify_threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.max_proofs_per_goal = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("weak unification of atoms") {
  const EmbeddingStore& s = fixture();
  SolverConfig c;
  auto r = weak_unify_atoms(atom("physical_harm", {V("X")}), atom("pushing_force", {C("action")}), {}, s, c);
  REQUIRE(r);
  CHECK(r->second == weak_unify_score(s, "physical_harm", "pushing_force"));
  REQUIRE(r->first.lookup("X"));
  CHECK(*r->first.lookup("X") == C("action"));

  CHECK_FALSE(weak_unify_atoms(atom("p", {C("a")}), atom("p", {C("b")}), {}, s, c));
  CHECK_FALSE(weak_unify_atoms(atom("p", {C("a")}), atom("p", {C("a"), C("a")}), {}, s, c));
  CHECK_FALSE(weak_unify_atoms(atom("physical_harm", {V("X")}), atom("prison", {V("Y")}), {}, s, c));
  auto shared = weak_unify_atoms(atom("p", {V("X"), V("X")}), atom("p", {C("a"), V("Y")}), {}, s, c);
  REQUIRE(shared);
  CHECK(apply_substitution(atom("q", {V("X"), V("Y")}), shared->first) == atom("q", {C("a"), C("a")}));
  CHECK_FALSE(weak_unify_atoms(atom("p", {V("X"), V("X")}), atom("p", {C("a"), C("b")}), {}, s, c));

  c.weak_constants = true;
  auto weak = weak_unify_atoms(atom("p", {C("prison")}), atom("p", {C("justice_system")}), {}, s, c);
  REQUIRE(weak);
  CHECK(weak->second == weak_unify_score(s, "prison", "justice_system"));
}

TEST_CASE("frog case proves a care violation") {
  KnowledgeBase kb = frog_kb();
  auto h = prove_all_goals(kb, kb.goals(), fixture(), {});
  REQUIRE(h);
  CHECK(h->violation == MoralViolation::Care);
  CHECK(h->result.proof_score == recompute_proof_score(h->result.proof));
  CHECK(format_score(h->result.proof_score).substr(0, 6) == "0.7691");
  CHECK(facts_in_proof(h->result, kb) == std::set<std::string>{"f1", "f2", "f3"});
  CHECK(h->budget_exceeded_goals.empty());

  CHECK(render_proof(h->result) ==
        "0.76919 violate_care_physical\n"
        "  violate_care_physical(action,patient) <= principle_1 [unify 1.00000, rule 1.0]\n"
        "    physical_harm(action) <= f3_r1 [unify 0.76919, rule 1.0]\n"
        "      compression(action) <= f1_r1 [unify 1.00000, rule 1.0]\n"
        "        crush(action) <= srl_1 [unify 1.00000, rule 1.0]\n"
        "    animal(patient) <= f2_r1 [unify 1.00000, rule 1.0]\n"
        "      frog(patient) <= srl_3 [unify 1.00000, rule 1.0]\n");
}

TEST_CASE("depth limit counts the goal as depth one") {
  GoalSpec g = goal_of("p0(a)");
  auto nine = prove_goal(chain_kb(9), g, fixture(), {});
  REQUIRE(nine);
  CHECK(nine->proof.depth() == 10);
  CHECK_FALSE(prove_goal(chain_kb(10), g, fixture(), {}));
  SolverConfig deeper;
  deeper.max_depth = 11;
  CHECK(prove_goal(chain_kb(10), g, fixture(), deeper));
}

TEST_CASE("proof budget") {
  std::string text;
  for (int i = 0; i < 20; ++i) text += "p(c" + std::to_string(i) + ").\n";
  KnowledgeBase kb = kb_of(text);
  SolverConfig c;
  c.max_proofs_per_goal = 5;
  auto r = prove_goal(kb, goal_of("p(X)"), fixture(), c);
  REQUIRE(r);
  CHECK(r->budget_exceeded);
  CHECK(r->proofs_enumerated == 5);
  c.max_proofs_per_goal = 20;
  r = prove_goal(kb, goal_of("p(X)"), fixture(), c);
  REQUIRE(r);
  CHECK_FALSE(r->budget_exceeded);
  CHECK(r->proofs_enumerated == 20);
  CHECK(r->used_rule_ids == std::set<std::string>{"r1"});
  CHECK(*r->bindings.lookup("X") == C("c0"));
}

TEST_CASE("tie-breaks") {
  SUBCASE("higher score wins") {
    KnowledgeBase kb = kb_of("p(a). = 0.8\np(a). = 0.9\n");
    auto r = prove_goal(kb, goal_of("p(a)"), fixture(), {});
    REQUIRE(r);
    CHECK(r->used_rule_ids == std::set<std::string>{"r2"});
  }
  SUBCASE("fewer steps win at equal score") {
    KnowledgeBase kb = kb_of("q(X) :- r(X).\nr(a).\nq(a).\n");
    auto r = prove_goal(kb, goal_of("q(a)"), fixture(), {});
    REQUIRE(r);
    CHECK(r->used_rule_ids == std::set<std::string>{"r3"});
  }
  SUBCASE("smaller rule ids win at equal score and size") {
    RuleDocument doc = parse_kb("p(a). = 0.9\np(a). = 0.9\n");
    doc.rules[0].id = "k2";
    doc.rules[1].id = "k1";
    auto r = prove_goal(to_knowledge_base(doc), goal_of("p(a)"), fixture(), {});
    REQUIRE(r);
    CHECK(r->used_rule_ids == std::set<std::string>{"k1"});
  }
  SUBCASE("earlier goal wins at equal score") {
    KnowledgeBase kb = kb_of("violate_care(X) :- harm(X).\nviolate_fairness(X) :- harm(X).\nharm(a).\n");
    std::vector<GoalSpec> goals{goal_of("violate_fairness(a)"), goal_of("violate_care(a)")};
    auto h = prove_all_goals(kb, goals, fixture(), {});
    REQUIRE(h);
    CHECK(h->goal_index == 0);
    CHECK(h->violation == MoralViolation::Fairness);
  }
}

TEST_CASE("threshold boundary") {
  KnowledgeBase kb = kb_of("p(a). = 0.13\n");
  CHECK(prove_goal(kb, goal_of("p(a)"), fixture(), {}));
  SolverConfig strict;
  strict.strict_threshold = true;
  CHECK_FALSE(prove_goal(kb, goal_of("p(a)"), fixture(), strict));
  CHECK_FALSE(prove_goal(kb_of("p(a). = 0.12\n"), goal_of("p(a)"), fixture(), {}));
}

TEST_CASE("mismatched constants need weak_constants") {
  KnowledgeBase kb = kb_of("p(justice_system).\n");
  CHECK_FALSE(prove_goal(kb, goal_of("p(prison)"), fixture(), {}));
  SolverConfig c;
  c.weak_constants = true;
  auto r = prove_goal(kb, goal_of("p(prison)"), fixture(), c);
  REQUIRE(r);
  CHECK(r->proof_score == weak_unify_score(fixture(), "prison", "justice_system"));
}

TEST_CASE("variables are renamed apart per rule application") {
  KnowledgeBase kb = kb_of("anc(X, Y) :- par(X, Y).\nanc(X, Y) :- par(X, Z), anc(Z, Y).\n"
                           "par(a, b).\npar(b, c).\npar(c, d).\n");
  auto r = prove_goal(kb, goal_of("anc(a, d)"), fixture(), {});
  REQUIRE(r);
  CHECK(r->proof_score == 1.0);
  CHECK(r->proof.size() == 6);
  CHECK_FALSE(prove_goal(kb, goal_of("anc(d, a)"), fixture(), {}));
}

TEST_CASE("property: the prover agrees with an independent breadth-first oracle") {
  gen::Rng rng(2024);
  SolverConfig c;
  int compared = 0, proved = 0;
  while (compared < 200) {
    gen::World w = gen::world(rng);
    gen::RandomKb r = gen::random_kb(rng, w);
    oracle::Stats stats;
    auto expected = oracle::best_proof(r.kb, r.goal.goal_atom, w.store, c.unify_threshold,
                                       c.proof_threshold, c.max_depth, 200000, stats);
    auto actual = prove_goal(r.kb, r.goal, w.store, c);
    if (stats.truncated || (actual && actual->budget_exceeded)) continue;
    ++compared;
    REQUIRE(expected.has_value() == actual.has_value());
    if (!expected) continue;
    ++proved;
    CHECK(actual->proof_score == expected->score);
    CHECK(actual->proof.size() == expected->steps);
    CHECK(std::vector<std::string>(actual->used_rule_ids.begin(), actual->used_rule_ids.end()) ==
          expected->rule_ids);
  }
  CHECK(proved >= 20);
}

TEST_CASE("property: pruning never changes the answer") {
  gen::Rng rng(77);
  SolverConfig on, off;
  on.max_depth = off.max_depth = 5;
  off.prune = false;
  for (int i = 0; i < 200; ++i) {
    gen::World w = gen::world(rng);
    gen::RandomKb r = gen::random_kb(rng, w);
    auto a = prove_goal(r.kb, r.goal, w.store, on);
    auto b = prove_goal(r.kb, r.goal, w.store, off);
    if ((a && a->budget_exceeded) || (b && b->budget_exceeded)) continue;
    CHECK(same_answer(a, b));
  }
}

TEST_CASE("property: adding a rule never lowers the best score") {
  gen::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    gen::World w = gen::world(rng);
    gen::RandomKb r = gen::random_kb(rng, w, 6);
    gen::RandomKb extra = gen::random_kb(rng, w, 1);
    KnowledgeBase bigger = r.kb;
    Rule added = extra.kb.rules().front();
    added.id = "z1";
    bigger.add(added);
    auto before = prove_goal(r.kb, r.goal, w.store, {});
    auto after = prove_goal(bigger, r.goal, w.store, {});
    if ((before && before->budget_exceeded) || (after && after->budget_exceeded)) continue;
    if (before) {
      REQUIRE(after);
      CHECK(after->proof_score >= before->proof_score);
    }
  }
}

TEST_CASE("property: returned proofs are sound") {
  gen::Rng rng(99);
  SolverConfig c;
  int proved = 0;
  for (int i = 0; i < 300; ++i) {
    gen::World w = gen::world(rng);
    gen::RandomKb r = gen::random_kb(rng, w);
    auto res = prove_goal(r.kb, r.goal, w.store, c);
    if (!res) continue;
    ++proved;
    CHECK(res->proof_score == recompute_proof_score(res->proof));
    CHECK(c.accepts(res->proof_score));
    CHECK(res->proof_score <= 1.0);
    CHECK(static_cast<int>(res->proof.depth()) <= c.max_depth);
    CHECK(res->goal.predicate == r.goal.goal_atom.predicate);
    check_sound(res->proof, r.kb, c);
    for (const auto& id : res->used_rule_ids) CHECK(r.kb.find(id) != nullptr);
  }
  CHECK(proved >= 30);
}

TEST_CASE("a prover instance can be reused across goals") {
  KnowledgeBase kb = frog_kb();
  Prover p(kb, fixture());
  auto first = p.prove_all(kb.goals());
  auto second = p.prove_all(kb.goals());
  REQUIRE(first);
  REQUIRE(second);
  CHECK(first->result.proof_score == second->result.proof_score);
  CHECK(render_proof(first->result) == render_proof(second->result));
}

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace softprove {

/// Variables match `[A-Z][A-Za-z0-9_]*`.
bool is_variable_name(std::string_view text);
/// Constants and predicates match `[a-z][a-z0-9_]*`.
bool is_symbol(std::string_view text);

class Term {
 public:
  /// Throws std::invalid_argument when `name` is not a valid variable name.
  static Term variable(std::string name);
  /// Throws std::invalid_argument when `symbol` is not a valid constant.
  static Term constant(std::string symbol);

  bool is_variable() const { return variable_; }
  bool is_constant() const { return !variable_; }
  const std::string& name() const { return name_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(bool variable, std::string name) : variable_(variable), name_(std::move(name)) {}

  bool variable_;
  std::string name_;
};

/// Arguments beyond this count are rejected by the parser.
inline constexpr std::size_t kMaxArity = 3;

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// `pred(a,X)` with no whitespace.
std::string to_string(const Atom& atom);

struct RuleOrigin {
  enum class Kind { Principle, SrlFact, GeneratedFact, GoalDecl };

  Kind kind = Kind::Principle;
  /// Id of the natural-language fact a GeneratedFact rule was formalized from.
  std::string fact_id;

  static RuleOrigin principle() { return {Kind::Principle, {}}; }
  static RuleOrigin srl_fact() { return {Kind::SrlFact, {}}; }
  static RuleOrigin generated(std::string id) { return {Kind::GeneratedFact, std::move(id)}; }

  friend bool operator==(const RuleOrigin&, const RuleOrigin&) = default;
};

std::string_view to_string(RuleOrigin::Kind kind);

/// A scored implication clause. An empty body makes it a fact.
struct Rule {
  Atom head;
  std::vector<Atom> body;
  double score = 1.0;
  std::string id;
  RuleOrigin origin;

  bool is_fact() const { return body.empty(); }

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Clause text without id or origin, e.g. `a(X) :- b(X). = 0.5`.
std::string to_string(const Rule& rule);

bool valid_score(double score);

/// Shortest fixed-point text that round-trips, with at least one fractional
/// digit: 1 -> "1.0", 0.672 -> "0.672".
std::string format_score(double score);

enum class MoralViolation { Care, Fairness, Loyalty, Authority, Sanctity, Liberty };

inline constexpr MoralViolation kAllViolations[] = {
    MoralViolation::Care,      MoralViolation::Fairness, MoralViolation::Loyalty,
    MoralViolation::Authority, MoralViolation::Sanctity, MoralViolation::Liberty};

/// Lowercase foundation name, e.g. "authority".
std::string_view to_string(MoralViolation v);
/// Case-insensitive match of a foundation name.
std::optional<MoralViolation> parse_violation(std::string_view label);

/// Maps a goal predicate such as `violate_care_physical` to its foundation.
/// Predicates that do not start with `violate_<foundation>` map to nothing.
std::optional<MoralViolation> violation_for_goal(std::string_view predicate);

struct GoalSpec {
  std::optional<MoralViolation> violation;
  Atom goal_atom;

  friend bool operator==(const GoalSpec&, const GoalSpec&) = default;
};

/// Builds a GoalSpec whose violation is derived from the predicate name.
GoalSpec make_goal(Atom goal_atom);

class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  /// Throws DuplicateRuleId on a repeated id, ScoreRangeError outside (0,1].
  void add(Rule rule);
  void add_all(std::span<const Rule> rules);
  void add_goal(GoalSpec goal);
  void add_goals(std::span<const GoalSpec> goals);

  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<GoalSpec>& goals() const { return goals_; }
  const Rule* find(std::string_view id) const;
  std::size_t size() const { return rules_.size(); }

 private:
  std::vector<Rule> rules_;
  std::vector<GoalSpec> goals_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Variable name -> term. Ordered so iteration and printing are deterministic.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init);

  /// Throws OccursCheckViolation if `term` is the variable itself.
  void bind(const std::string& variable, Term term);
  const Term* lookup(const std::string& variable) const;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Term>& bindings() const { return map_; }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> map_;
};

std::string to_string(const Substitution& theta);

/// Single pass: bound variables are replaced by their image, nothing is chased.
Term apply_substitution(const Term& term, const Substitution& theta);
Atom apply_substitution(const Atom& atom, const Substitution& theta);

/// Result satisfies apply(compose(a,b), x) == apply(b, apply(a, x)).
Substitution compose(const Substitution& first, const Substitution& second);

}  // namespace softprove

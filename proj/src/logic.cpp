#include "softprove/logic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "softprove/errors.hpp"

namespace softprove {

bool is_variable_name(std::string_view text) {
  if (text.empty() || !std::isupper(static_cast<unsigned char>(text.front()))) return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_symbol(std::string_view text) {
  if (text.empty() || !std::islower(static_cast<unsigned char>(text.front()))) return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) ||
           std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

Term Term::variable(std::string name) {
  if (!is_variable_name(name)) throw std::invalid_argument("invalid variable name: " + name);
  return Term(true, std::move(name));
}

Term Term::constant(std::string symbol) {
  if (!is_symbol(symbol)) throw std::invalid_argument("invalid constant symbol: " + symbol);
  return Term(false, std::move(symbol));
}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::string to_string(const Atom& atom) {
  std::string out = atom.predicate;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += atom.args[i].name();
  }
  out += ')';
  return out;
}

std::string_view to_string(RuleOrigin::Kind kind) {
  switch (kind) {
    case RuleOrigin::Kind::Principle: return "principle";
    case RuleOrigin::Kind::SrlFact: return "srl";
    case RuleOrigin::Kind::GeneratedFact: return "fact";
    case RuleOrigin::Kind::GoalDecl: return "goal";
  }
  return "principle";
}

bool valid_score(double score) { return score > 0.0 && score <= 1.0; }

std::string format_score(double score) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), score,
                                 std::chars_format::fixed);
  std::string out(buf.data(), end);
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

std::string to_string(const Rule& rule) {
  std::string out = to_string(rule.head);
  if (!rule.body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (i) out += ", ";
      out += to_string(rule.body[i]);
    }
  }
  out += ". = ";
  out += format_score(rule.score);
  return out;
}

std::string_view to_string(MoralViolation v) {
  switch (v) {
    case MoralViolation::Care: return "care";
    case MoralViolation::Fairness: return "fairness";
    case MoralViolation::Loyalty: return "loyalty";
    case MoralViolation::Authority: return "authority";
    case MoralViolation::Sanctity: return "sanctity";
    case MoralViolation::Liberty: return "liberty";
  }
  return "care";
}

std::optional<MoralViolation> parse_violation(std::string_view label) {
  std::string lower;
  for (char c : label) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto v : kAllViolations)
    if (lower == to_string(v)) return v;
  return std::nullopt;
}

std::optional<MoralViolation> violation_for_goal(std::string_view predicate) {
  constexpr std::string_view prefix = "violate_";
  if (!predicate.starts_with(prefix)) return std::nullopt;
  auto rest = predicate.substr(prefix.size());
  for (auto v : kAllViolations) {
    auto name = to_string(v);
    if (rest.starts_with(name) && (rest.size() == name.size() || rest[name.size()] == '_'))
      return v;
  }
  return std::nullopt;
}

GoalSpec make_goal(Atom goal_atom) {
  auto violation = violation_for_goal(goal_atom.predicate);
  return GoalSpec{violation, std::move(goal_atom)};
}

void KnowledgeBase::add(Rule rule) {
  if (!valid_score(rule.score)) throw ScoreRangeError(rule.score);
  if (index_.contains(rule.id)) throw DuplicateRuleId("duplicate rule id: " + rule.id);
  index_.emplace(rule.id, rules_.size());
  rules_.push_back(std::move(rule));
}

void KnowledgeBase::add_all(std::span<const Rule> rules) {
  for (const auto& r : rules) add(r);
}

void KnowledgeBase::add_goal(GoalSpec goal) { goals_.push_back(std::move(goal)); }

void KnowledgeBase::add_goals(std::span<const GoalSpec> goals) {
  goals_.insert(goals_.end(), goals.begin(), goals.end());
}

const Rule* KnowledgeBase::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &rules_[it->second];
}

Substitution::Substitution(std::initializer_list<std::pair<const std::string, Term>> init) {
  for (const auto& [var, term] : init) bind(var, term);
}

void Substitution::bind(const std::string& variable, Term term) {
  if (term.is_variable() && term.name() == variable)
    throw OccursCheckViolation("variable " + variable + " cannot be bound to itself");
  map_.insert_or_assign(variable, std::move(term));
}

const Term* Substitution::lookup(const std::string& variable) const {
  auto it = map_.find(variable);
  return it == map_.end() ? nullptr : &it->second;
}

std::string to_string(const Substitution& theta) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, term] : theta.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += var + "->" + term.name();
  }
  return out + "}";
}

Term apply_substitution(const Term& term, const Substitution& theta) {
  if (term.is_variable()) {
    if (const Term* image = theta.lookup(term.name())) return *image;
  }
  return term;
}

Atom apply_substitution(const Atom& atom, const Substitution& theta) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) out.args.push_back(apply_substitution(t, theta));
  return out;
}

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  // Terms are function-free, so the only binding that could contain its own
  // variable is X->X, which is the identity and is dropped.
  for (const auto& [var, term] : first.bindings()) {
    Term image = apply_substitution(term, second);
    if (image.is_variable() && image.name() == var) continue;
    out.bind(var, std::move(image));
  }
  for (const auto& [var, term] : second.bindings()) {
    if (first.lookup(var) == nullptr) out.bind(var, term);
  }
  return out;
}

}  // namespace softprove

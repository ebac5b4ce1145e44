#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "softprove/logic.hpp"

namespace softprove {

struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct RuleDocument {
  std::vector<Rule> rules;
  std::vector<GoalSpec> goal_decls;
  /// Rule id -> position of the clause's first character.
  std::map<std::string, SourceSpan> source_spans;
};

/// Equality of rules and goals; source positions are ignored.
bool structurally_equal(const RuleDocument& a, const RuleDocument& b);

struct ParseOptions {
  /// Rule ids are `<prefix><n>`, numbered from 1 in document order.
  std::string id_prefix = "r";
  /// Origin of clauses that precede any `%@` origin pragma.
  RuleOrigin origin = RuleOrigin::principle();
};

/// Parses exactly one clause. Throws SyntaxError, ArityError or ScoreRangeError.
Rule parse_rule(std::string_view text, const ParseOptions& options = {});

/// Parses clauses, `goal <- a(x) | b(x).` declarations, `%` comments, and the
/// origin pragmas `%@ principle`, `%@ srl`, `%@ fact <id>`. Throws
/// DocumentError listing every malformed clause.
RuleDocument parse_kb(std::string_view text, const ParseOptions& options = {});

/// Canonical text: the goal line first, then one clause per line, with origin
/// pragmas emitted wherever the origin changes. parse_kb(serialize(d)) == d.
std::string serialize(const RuleDocument& doc);

/// Reads a file and parses it with parse_kb. Throws ConfigError when unreadable.
RuleDocument load_rule_file(const std::string& path, const ParseOptions& options = {});

KnowledgeBase to_knowledge_base(const RuleDocument& doc);

}  // namespace softprove

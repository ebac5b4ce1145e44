#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "softprove/logic.hpp"
#include "softprove/ruleparse.hpp"

namespace softprove {

/// Text of the built-in principle library shipped as data/principles.pl.
std::string_view default_principles_text();

/// Built-in moral-principle rules (ids `principle_<n>`, score 1.0). Parsed once.
const std::vector<Rule>& default_principles();

/// Goal disjunction declared by the built-in library, in tie-break order.
const std::vector<GoalSpec>& default_goals();

/// Parses a principle library with the same id scheme as the built-in one.
RuleDocument parse_principles(std::string_view text);
RuleDocument load_principles(const std::string& path);

}  // namespace softprove

#include "softprove/principles.hpp"

namespace softprove {

namespace detail {
extern const std::string_view kPrinciplesText;
}

namespace {

const RuleDocument& builtin_document() {
  static const RuleDocument doc = parse_principles(detail::kPrinciplesText);
  return doc;
}

ParseOptions principle_options() {
  ParseOptions options;
  options.id_prefix = "principle_";
  options.origin = RuleOrigin::principle();
  return options;
}

}  // namespace

std::string_view default_principles_text() { return detail::kPrinciplesText; }

const std::vector<Rule>& default_principles() { return builtin_document().rules; }

const std::vector<GoalSpec>& default_goals() { return builtin_document().goal_decls; }

RuleDocument parse_principles(std::string_view text) {
  return parse_kb(text, principle_options());
}

RuleDocument load_principles(const std::string& path) {
  return load_rule_file(path, principle_options());
}

}  // namespace softprove

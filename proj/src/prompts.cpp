#include "softprove/prompts.hpp"

#include <algorithm>

#include "softprove/errors.hpp"

namespace softprove {

std::string_view to_string(PromptRole role) {
  switch (role) {
    case PromptRole::Semantic: return "semantic";
    case PromptRole::Autoformalize: return "autoformalize";
    case PromptRole::Abduce: return "abduce";
    case PromptRole::Deduce: return "deduce";
    case PromptRole::ZeroShot: return "zeroshot";
    case PromptRole::CoT: return "cot";
  }
  return "semantic";
}

std::string_view foundation_definitions() {
  return "care: protecting others from physical or emotional harm.\n"
         "fairness: justice, reciprocity and equal treatment; no cheating.\n"
         "loyalty: standing with one's group, family or nation.\n"
         "authority: respecting legitimate rules, roles and institutions.\n"
         "sanctity: avoiding degrading or disgusting acts.\n"
         "liberty: freedom from coercion and domination.";
}

namespace {

const std::string kOutputFormat =
    "Answer in exactly this format:\n"
    "Premises:\n"
    "- <one short declarative sentence per line>\n"
    "Hypothesis: <care|fairness|loyalty|authority|sanctity|liberty>";

// Definitions, one worked example, then the statement and its role frame.
const PromptTemplate kSemantic{
    PromptRole::Semantic,
    "You explain which moral foundation a statement violates.",
    "Moral foundations:\n{principles}\n\n"
    "Example.\n"
    "Statement: I copied my classmate's answers during the exam.\n"
    "Roles: action: copy; agent: I; patient: my classmate's answers\n"
    "Premises:\n"
    "- Copying answers during an exam is cheating.\n"
    "- Cheating gives an unfair advantage over other students.\n"
    "Hypothesis: fairness\n\n"
    "Statement: {statement}\n"
    "Roles: {frame}\n" +
        kOutputFormat};

// One sentence in, Horn clauses out.
const PromptTemplate kAutoformalize{
    PromptRole::Autoformalize,
    "You translate sentences into Prolog-style rules.",
    "Translate the fact below into one or more rules of the form\n"
    "  head(X) :- body(X). = <score in (0,1]>\n"
    "Use lowercase snake_case predicates, the variable X, and one rule per line.\n"
    "Example: \"Hammers are tools\" becomes\n"
    "  tool(X) :- hammer(X). = 1.0\n\n"
    "Statement: {statement}\n"
    "Roles: {frame}\n"
    "Fact: {facts}\n"
    "Rules:"};

const PromptTemplate kAbduce{
    PromptRole::Abduce,
    "You supply missing premises for moral arguments.",
    "Statement: {statement}\n"
    "Target hypothesis: the statement violates {hypothesis}.\n"
    "Premises already supported by a proof:\n{facts}\n\n"
    "List the additional premises needed so that the premises together entail "
    "the hypothesis.\n" +
        kOutputFormat};

const PromptTemplate kDeduce{
    PromptRole::Deduce,
    "You decide which moral foundation a set of premises supports.",
    "Moral foundations:\n{principles}\n\n"
    "Premises:\n{facts}\n\n"
    "Which single foundation do these premises show to be violated?\n"
    "Answer with one line: Hypothesis: <foundation>"};

const PromptTemplate kZeroShot{
    PromptRole::ZeroShot,
    "You explain which moral foundation a statement violates.",
    "Statement: {statement}\n" + kOutputFormat};

const PromptTemplate kCoT{
    PromptRole::CoT,
    "You explain which moral foundation a statement violates.",
    "Statement: {statement}\n"
    "Think step by step about who is affected and how, then answer.\n" +
        kOutputFormat};

}  // namespace

std::vector<std::string> PromptTemplate::slots() const {
  std::vector<std::string> out;
  for (std::size_t open = user.find('{'); open != std::string::npos;
       open = user.find('{', open + 1)) {
    const std::size_t close = user.find('}', open);
    if (close == std::string::npos) break;
    std::string name = user.substr(open + 1, close - open - 1);
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
      continue;
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
  }
  return out;
}

const PromptTemplate& prompt_template(PromptRole role) {
  switch (role) {
    case PromptRole::Semantic: return kSemantic;
    case PromptRole::Autoformalize: return kAutoformalize;
    case PromptRole::Abduce: return kAbduce;
    case PromptRole::Deduce: return kDeduce;
    case PromptRole::ZeroShot: return kZeroShot;
    case PromptRole::CoT: return kCoT;
  }
  return kSemantic;
}

std::vector<ChatMessage> render_prompt(PromptRole role,
                                       const std::map<std::string, std::string>& values) {
  const PromptTemplate& tpl = prompt_template(role);
  std::vector<std::string> missing;
  for (const auto& slot : tpl.slots())
    if (!values.contains(slot)) missing.push_back(slot);
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw ConfigError("unfilled prompt slot(s) for " + std::string(to_string(role)) + ": " + names);
  }
  // Single left-to-right pass so filled text is never re-expanded.
  std::string out;
  const std::string& text = tpl.user;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const std::size_t close = text.find('}', i);
      if (close != std::string::npos) {
        auto it = values.find(text.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return {{"system", tpl.system}, {"user", out}};
}

}  // namespace softprove

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "softprove/logic.hpp"

namespace softprove {

/// Lowercase, non-alphanumerics to `_`, repeats collapsed, ends stripped.
/// "The FROG!!" -> "the_frog". May return an empty string.
std::string normalize_phrase(std::string_view phrase);

struct SemanticFrame {
  std::string statement;
  std::string action;  ///< normalized action lemma
  std::optional<std::string> agent;
  std::optional<std::string> patient;
  /// Normalized role name -> normalized phrase.
  std::map<std::string, std::string> extra_roles;
  /// Phrases as written in the source, for prompt rendering.
  std::optional<std::string> agent_text;
  std::optional<std::string> patient_text;

  friend bool operator==(const SemanticFrame&, const SemanticFrame&) = default;
};

/// Reads `{statement, action, agent?, patient?, roles?}`. Throws SchemaError
/// listing every missing or ill-typed key.
SemanticFrame frame_from_json(const nlohmann::json& doc);
SemanticFrame load_frame(std::string_view json_text);
/// A JSON array of frames.
std::vector<SemanticFrame> load_frames(std::string_view json_text);

nlohmann::json frame_to_json(const SemanticFrame& frame);

/// One-line human-readable rendering used inside prompts.
std::string describe_frame(const SemanticFrame& frame);

/// Ground facts `<action>(action).`, `<patient>(patient).` plus the head noun
/// when it differs, `<agent>(agent).`, and `<phrase>(<role>).` for extra
/// roles. Ids are `srl_<n>`, origin SrlFact, score 1.0.
std::vector<Rule> frame_to_facts(const SemanticFrame& frame);

}  // namespace softprove

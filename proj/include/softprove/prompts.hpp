#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "softprove/chat_client.hpp"

namespace softprove {

enum class PromptRole { Semantic, Autoformalize, Abduce, Deduce, ZeroShot, CoT };

/// Lowercase name, also used as ChatParams::purpose: "semantic", "autoformalize", ...
std::string_view to_string(PromptRole role);

struct PromptTemplate {
  PromptRole role;
  std::string system;
  /// User message with `{slot}` placeholders.
  std::string user;

  /// Slot names referenced by the template, in order of first use.
  std::vector<std::string> slots() const;
};

const PromptTemplate& prompt_template(PromptRole role);

/// Fills every slot of the role's template. Throws ConfigError naming any
/// referenced slot missing from `values`.
std::vector<ChatMessage> render_prompt(PromptRole role,
                                       const std::map<std::string, std::string>& values);

/// Short definitions of the six foundations, filled into `{principles}`.
std::string_view foundation_definitions();

}  // namespace softprove

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "softprove/chat_client.hpp"
#include "softprove/prover.hpp"

namespace softprove {

struct AppConfig {
  SolverConfig solver;
  std::optional<std::string> principles_path;
  std::optional<std::string> embeddings_path;
  bool open_goals = false;
  int jobs = 1;
  std::uint64_t seed = 20240617;
  int max_iterations = 3;
  ChatParams chat;
};

using Settings = std::map<std::string, std::string>;

/// Applies one `key=value` setting. Keys: unify_threshold, proof_threshold,
/// max_depth, max_proofs, strict_threshold, weak_constants, prune,
/// open_goals, principles, embeddings, jobs, seed, max_iterations, model,
/// temperature, max_tokens, timeout_ms. Throws ConfigError.
void apply_setting(AppConfig& config, const std::string& key, const std::string& value);

/// Plain `key = value` lines; `#` starts a comment. Throws ConfigError.
Settings read_config_file(const std::string& path);

/// `SOFTPROVE_<KEY>` variables for the known keys, keyed by lowercase key.
Settings environment_settings();

/// File, then environment, then flags; later sources win. Validates the
/// solver configuration.
AppConfig resolve_config(const Settings& file, const Settings& env, const Settings& flags);

}  // namespace softprove

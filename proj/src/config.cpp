#include "softprove/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "softprove/errors.hpp"

namespace softprove {

namespace {

const char* const kKeys[] = {"unify_threshold", "proof_threshold", "max_depth",      "max_proofs",
                             "strict_threshold", "weak_constants", "prune",          "open_goals",
                             "principles",       "embeddings",     "jobs",           "seed",
                             "max_iterations",   "model",          "temperature",    "max_tokens",
                             "timeout_ms"};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& value) {
  Int out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return out;
}

bool to_bool(const std::string& key, std::string value) {
  std::transform(value.begin(), value.end(), value.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

}  // namespace

void apply_setting(AppConfig& c, const std::string& key, const std::string& value) {
  if (key == "unify_threshold") c.solver.unify_threshold = to_double(key, value);
  else if (key == "proof_threshold") c.solver.proof_threshold = to_double(key, value);
  else if (key == "max_depth") c.solver.max_depth = to_int<int>(key, value);
  else if (key == "max_proofs") c.solver.max_proofs_per_goal = to_int<std::size_t>(key, value);
  else if (key == "strict_threshold") c.solver.strict_threshold = to_bool(key, value);
  else if (key == "weak_constants") c.solver.weak_constants = to_bool(key, value);
  else if (key == "prune") c.solver.prune = to_bool(key, value);
  else if (key == "open_goals") c.open_goals = to_bool(key, value);
  else if (key == "principles") c.principles_path = value;
  else if (key == "embeddings") c.embeddings_path = value;
  else if (key == "jobs") {
    c.jobs = to_int<int>(key, value);
    if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  } else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
  else if (key == "max_iterations") {
    c.max_iterations = to_int<int>(key, value);
    if (c.max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
  } else if (key == "model") c.chat.model = value;
  else if (key == "temperature") c.chat.temperature = to_double(key, value);
  else if (key == "max_tokens") c.chat.max_tokens = to_int<int>(key, value);
  else if (key == "timeout_ms") c.chat.timeout = std::chrono::milliseconds(to_int<long>(key, value));
  else throw ConfigError("unknown setting '" + key + "'");
}

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  Settings out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings environment_settings() {
  Settings out;
  for (const char* key : kKeys) {
    std::string name = "SOFTPROVE_";
    for (const char* p = key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* v = std::getenv(name.c_str())) out[key] = v;
  }
  return out;
}

AppConfig resolve_config(const Settings& file, const Settings& env, const Settings& flags) {
  AppConfig c;
  for (const Settings* s : {&file, &env, &flags})
    for (const auto& [k, v] : *s) apply_setting(c, k, v);
  c.solver.validate();
  return c;
}

}  // namespace softprove

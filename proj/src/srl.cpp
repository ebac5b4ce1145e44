#include "softprove/srl.hpp"

#include <cctype>

#include "softprove/errors.hpp"

namespace softprove {

std::string normalize_phrase(std::string_view phrase) {
  std::string out;
  for (char c : phrase) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) && u < 0x80) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

namespace {

using nlohmann::json;

std::optional<std::string> read_symbol(const json& doc, const char* key, bool required,
                                       std::vector<std::string>& problems,
                                       std::optional<std::string>* raw = nullptr) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) {
    if (required) problems.push_back(std::string("missing key '") + key + "'");
    return std::nullopt;
  }
  if (!it->is_string()) {
    problems.push_back(std::string("key '") + key + "' must be a string");
    return std::nullopt;
  }
  const std::string text = it->get<std::string>();
  std::string sym = normalize_phrase(text);
  if (!is_symbol(sym)) {
    problems.push_back(std::string("key '") + key + "' does not normalize to a symbol: '" + text + "'");
    return std::nullopt;
  }
  if (raw) *raw = text;
  return sym;
}

}  // namespace

SemanticFrame frame_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError({"frame must be a JSON object"});
  std::vector<std::string> problems;
  SemanticFrame frame;
  auto st = doc.find("statement");
  if (st == doc.end()) {
    problems.push_back("missing key 'statement'");
  } else if (!st->is_string()) {
    problems.push_back("key 'statement' must be a string");
  } else {
    frame.statement = st->get<std::string>();
  }
  if (auto a = read_symbol(doc, "action", true, problems)) frame.action = *a;
  frame.agent = read_symbol(doc, "agent", false, problems, &frame.agent_text);
  frame.patient = read_symbol(doc, "patient", false, problems, &frame.patient_text);
  if (auto roles = doc.find("roles"); roles != doc.end() && !roles->is_null()) {
    if (!roles->is_object()) {
      problems.push_back("key 'roles' must be an object");
    } else {
      for (const auto& [name, value] : roles->items()) {
        std::string role = normalize_phrase(name);
        if (!is_symbol(role)) {
          problems.push_back("role name does not normalize to a symbol: '" + name + "'");
          continue;
        }
        if (!value.is_string()) {
          problems.push_back("role '" + name + "' must be a string");
          continue;
        }
        std::string sym = normalize_phrase(value.get<std::string>());
        if (!is_symbol(sym)) {
          problems.push_back("role '" + name + "' does not normalize to a symbol");
          continue;
        }
        frame.extra_roles.emplace(std::move(role), std::move(sym));
      }
    }
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return frame;
}

SemanticFrame load_frame(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError({"frame is not valid JSON"});
  return frame_from_json(doc);
}

std::vector<SemanticFrame> load_frames(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError({"frame batch is not valid JSON"});
  if (!doc.is_array()) throw SchemaError({"frame batch must be a JSON array"});
  std::vector<SemanticFrame> frames;
  for (const auto& item : doc) frames.push_back(frame_from_json(item));
  return frames;
}

nlohmann::json frame_to_json(const SemanticFrame& frame) {
  json out = {{"statement", frame.statement}, {"action", frame.action}};
  if (frame.agent) out["agent"] = frame.agent_text.value_or(*frame.agent);
  if (frame.patient) out["patient"] = frame.patient_text.value_or(*frame.patient);
  if (!frame.extra_roles.empty()) out["roles"] = frame.extra_roles;
  return out;
}

std::string describe_frame(const SemanticFrame& frame) {
  std::string out = "action: " + frame.action;
  if (frame.agent) out += "; agent: " + frame.agent_text.value_or(*frame.agent);
  if (frame.patient) out += "; patient: " + frame.patient_text.value_or(*frame.patient);
  for (const auto& [role, phrase] : frame.extra_roles) out += "; " + role + ": " + phrase;
  return out;
}

std::vector<Rule> frame_to_facts(const SemanticFrame& frame) {
  std::vector<Rule> facts;
  auto emit = [&](const std::string& predicate, const std::string& role) {
    Rule r;
    r.head = Atom{predicate, {Term::constant(role)}};
    r.score = 1.0;
    r.id = "srl_" + std::to_string(facts.size() + 1);
    r.origin = RuleOrigin::srl_fact();
    facts.push_back(std::move(r));
  };
  emit(frame.action, "action");
  if (frame.patient) {
    emit(*frame.patient, "patient");
    auto cut = frame.patient->rfind('_');
    if (cut != std::string::npos) {
      std::string head = frame.patient->substr(cut + 1);
      if (is_symbol(head)) emit(head, "patient");
    }
  }
  if (frame.agent) emit(*frame.agent, "agent");
  for (const auto& [role, phrase] : frame.extra_roles) emit(phrase, role);
  return facts;
}

}  // namespace softprove

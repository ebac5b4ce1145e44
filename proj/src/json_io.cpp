#include "softprove/json_io.hpp"

#include <set>

#include "softprove/errors.hpp"
#include "softprove/srl.hpp"

namespace softprove {

using nlohmann::json;

namespace {

json violation_json(const std::optional<MoralViolation>& v) {
  return v ? json(std::string(to_string(*v))) : json(nullptr);
}

}  // namespace

json rule_to_json(const Rule& rule) {
  json out = {{"id", rule.id}, {"text", to_string(rule)}, {"origin", std::string(to_string(rule.origin.kind))}};
  if (rule.origin.kind == RuleOrigin::Kind::GeneratedFact) out["fact_id"] = rule.origin.fact_id;
  return out;
}

json proof_step_to_json(const ProofStep& step) {
  json children = json::array();
  for (const auto& c : step.children) children.push_back(proof_step_to_json(c));
  return {{"goal", to_string(step.goal)},
          {"rule_id", step.rule_id},
          {"unification_score", step.unification_score},
          {"rule_score", step.rule_score},
          {"children", std::move(children)}};
}

json proof_to_json(const ProofResult& result) {
  json bindings = json::object();
  for (const auto& [var, term] : result.bindings.bindings()) bindings[var] = term.name();
  return {{"violation", violation_json(result.violation)},
          {"goal", to_string(result.goal)},
          {"proof_score", result.proof_score},
          {"used_rule_ids", result.used_rule_ids},
          {"bindings", std::move(bindings)},
          {"budget_exceeded", result.budget_exceeded},
          {"proofs_enumerated", result.proofs_enumerated},
          {"tree", proof_step_to_json(result.proof)},
          {"rendered", render_proof(result)}};
}

json hypothesis_to_json(const InferredHypothesis& h) {
  json out = proof_to_json(h.result);
  out["goal_index"] = h.goal_index;
  out["budget_exceeded_goals"] = h.budget_exceeded_goals;
  return out;
}

json outcome_to_json(const VerificationOutcome& outcome) {
  return {{"outcome", std::string(to_string(outcome.kind))},
          {"valid", outcome.valid()},
          {"entailed", violation_json(outcome.entailed)},
          {"unused_fact_ids", outcome.unused_fact_ids},
          {"proof", outcome.proof ? hypothesis_to_json(*outcome.proof) : json(nullptr)}};
}

json metrics_row_to_json(const MetricsRow& row) {
  return {{"n", row.total},
          {"valid", row.valid},
          {"invalid", row.invalid},
          {"valid_non_redundant", row.non_redundant},
          {"valid_redundant", row.redundant},
          {"valid_pct", row.valid_tenths() / 10.0},
          {"invalid_pct", row.invalid_tenths() / 10.0},
          {"valid_non_redundant_pct", row.non_redundant_tenths() / 10.0},
          {"valid_redundant_pct", row.redundant_tenths() / 10.0}};
}

json metrics_to_json(const MetricsReport& report) {
  json iterations = json::array();
  for (const auto& [iteration, row] : report.per_iteration) {
    json r = metrics_row_to_json(row);
    r["iteration"] = iteration;
    iterations.push_back(std::move(r));
  }
  return {{"empty", report.empty},
          {"overall", metrics_row_to_json(report.overall)},
          {"iterations", std::move(iterations)}};
}

json case_to_json(const EthicalCase& c) {
  json facts = json::array();
  for (const auto& f : c.nl_facts) facts.push_back({{"id", f.id}, {"text", f.text}});
  json out = {{"id", c.id},
              {"statement", c.statement},
              {"frame", frame_to_json(c.frame)},
              {"facts", std::move(facts)},
              {"hypothesis", std::string(to_string(c.hypothesis))}};
  if (c.gold_violation) out["gold_violation"] = std::string(to_string(*c.gold_violation));
  if (c.manual_invalid_class)
    out["manual_invalid_class"] = std::string(to_string(*c.manual_invalid_class));
  return out;
}

EthicalCase case_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError({"case must be a JSON object"});
  std::vector<std::string> problems;
  EthicalCase c;
  auto string_field = [&](const char* key, bool required) -> std::optional<std::string> {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) {
      if (required) problems.push_back(std::string("missing key '") + key + "'");
      return std::nullopt;
    }
    if (!it->is_string()) {
      problems.push_back(std::string("key '") + key + "' must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  };
  auto violation_field = [&](const char* key, bool required) -> std::optional<MoralViolation> {
    auto text = string_field(key, required);
    if (!text) return std::nullopt;
    auto v = parse_violation(*text);
    if (!v) problems.push_back(std::string("key '") + key + "' is not a foundation: '" + *text + "'");
    return v;
  };

  if (auto id = string_field("id", true)) c.id = *id;
  if (auto frame = doc.find("frame"); frame == doc.end()) {
    problems.push_back("missing key 'frame'");
  } else {
    try {
      c.frame = frame_from_json(*frame);
    } catch (const SchemaError& e) {
      for (const auto& p : e.problems()) problems.push_back("frame: " + p);
    }
  }
  c.statement = string_field("statement", false).value_or(c.frame.statement);
  if (auto facts = doc.find("facts"); facts != doc.end()) {
    if (!facts->is_array()) {
      problems.push_back("key 'facts' must be an array");
    } else {
      std::set<std::string> seen;
      for (const auto& f : *facts) {
        if (!f.is_object() || !f.contains("id") || !f.contains("text") || !f["id"].is_string() ||
            !f["text"].is_string()) {
          problems.push_back("each fact needs string 'id' and 'text'");
          continue;
        }
        NlFact fact{f["id"].get<std::string>(), f["text"].get<std::string>()};
        if (!seen.insert(fact.id).second) problems.push_back("duplicate fact id '" + fact.id + "'");
        c.nl_facts.push_back(std::move(fact));
      }
    }
  }
  const bool has_facts = !c.nl_facts.empty();
  if (auto h = violation_field("hypothesis", has_facts)) c.hypothesis = *h;
  c.gold_violation = violation_field("gold_violation", false);
  if (auto cls = string_field("manual_invalid_class", false)) {
    c.manual_invalid_class = parse_invalid_class(*cls);
    if (!c.manual_invalid_class) problems.push_back("unknown manual_invalid_class '" + *cls + "'");
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return c;
}

}  // namespace softprove

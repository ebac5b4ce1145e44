#include "softprove/refine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "softprove/errors.hpp"
#include "softprove/json_io.hpp"

namespace softprove {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_marker(std::string line) {
  line = trim(line);
  if (!line.empty() && (line[0] == '-' || line[0] == '*' || line[0] == '\xe2')) {
    // '\xe2' starts a UTF-8 bullet such as U+2022.
    std::size_t skip = line[0] == '\xe2' ? std::min<std::size_t>(3, line.size()) : 1;
    return trim(std::string_view(line).substr(skip));
  }
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') &&
      std::isspace(static_cast<unsigned char>(line[i + 1])))
    return trim(std::string_view(line).substr(i + 1));
  return line;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

// Case-insensitive search for a `Label:` marker.
std::size_t find_label(std::string_view text, std::string_view label) {
  return lower(text).find(lower(label));
}

std::string fact_key(std::string_view text) {
  std::string key = lower(trim(text));
  while (!key.empty() && (key.back() == '.' || key.back() == '!')) key.pop_back();
  return trim(key);
}

std::string facts_block(std::span<const NlFact> facts) {
  if (facts.empty()) return "(none)";
  std::string out;
  for (const auto& f : facts) {
    if (!out.empty()) out += '\n';
    out += "- " + f.text;
  }
  return out;
}

ChatParams with_purpose(const ChatParams& params, PromptRole role) {
  ChatParams p = params;
  p.purpose = std::string(to_string(role));
  return p;
}

// Sends the prompt and parses the reply; a ParseFailure earns one re-ask with
// the reason, after which the failure propagates.
template <class Parse>
auto ask(ChatClient& client, std::vector<ChatMessage> messages, const ChatParams& params,
         Parse parse) -> decltype(parse(std::string())) {
  std::string reply = client.complete(messages, params);
  try {
    return parse(reply);
  } catch (const ParseFailure& e) {
    messages.push_back({"assistant", reply});
    messages.push_back({"user", std::string("Your answer could not be used: ") + e.what() +
                                    ". Answer again using exactly the requested format."});
    return parse(client.complete(messages, params));
  }
}

}  // namespace

std::vector<std::string> split_premises(std::string_view block) {
  std::vector<std::string> out;
  for (const auto& raw : lines_of(block)) {
    std::string line = strip_marker(raw);
    std::size_t start = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if ((c == '.' || c == '!' || c == '?') && i + 2 < line.size() &&
          std::isspace(static_cast<unsigned char>(line[i + 1]))) {
        std::size_t j = i + 1;
        while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j < line.size() && std::isupper(static_cast<unsigned char>(line[j]))) {
          out.push_back(trim(std::string_view(line).substr(start, i + 1 - start)));
          start = j;
        }
      }
    }
    std::string tail = trim(std::string_view(line).substr(start));
    if (!tail.empty()) out.push_back(std::move(tail));
  }
  std::erase_if(out, [](const std::string& s) { return s.empty(); });
  return out;
}

ExplanationReply parse_explanation_reply(std::string_view reply) {
  const std::size_t p = find_label(reply, "premises:");
  const std::size_t h = find_label(reply, "hypothesis:");
  if (p == std::string::npos) throw ParseFailure("reply has no 'Premises:' section", std::string(reply));
  if (h == std::string::npos || h < p)
    throw ParseFailure("reply has no 'Hypothesis:' line after the premises", std::string(reply));
  ExplanationReply out;
  out.premises = split_premises(reply.substr(p + 9, h - (p + 9)));
  std::string_view rest = reply.substr(h + 11);
  out.hypothesis_label = trim(rest.substr(0, rest.find('\n')));
  if (out.hypothesis_label.empty())
    throw ParseFailure("empty hypothesis label", std::string(reply));
  return out;
}

MoralViolation parse_hypothesis_label(std::string_view label) {
  const std::string text = lower(label);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      if (auto v = parse_violation(std::string_view(text).substr(i, j - i))) return *v;
    }
    i = j;
  }
  throw UnknownViolation(std::string(label));
}

RulesReply parse_rules_reply(std::string_view reply) {
  RulesReply out;
  for (const auto& raw : lines_of(reply)) {
    std::string line = strip_marker(raw);
    if (line.empty() || line.starts_with("```") || line.starts_with("%")) continue;
    if (lower(line).starts_with("rules:")) continue;
    try {
      out.rules.push_back(parse_rule(line));
    } catch (const Error&) {
      out.bad_lines.push_back(line);
    }
  }
  return out;
}

void FactNumbering::observe(std::span<const NlFact> facts) {
  for (const auto& f : facts) {
    if (f.id.size() < 2 || f.id[0] != 'f') continue;
    const std::string digits = f.id.substr(1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    next_ = std::max(next_, std::stoi(digits) + 1);
  }
}

SemanticResult semantic_inference(const SemanticFrame& frame, ChatClient& client,
                                  const ChatParams& params, FactNumbering& ids) {
  auto messages = render_prompt(PromptRole::Semantic,
                                {{"principles", std::string(foundation_definitions())},
                                 {"statement", frame.statement},
                                 {"frame", describe_frame(frame)}});
  ExplanationReply reply =
      ask(client, std::move(messages), with_purpose(params, PromptRole::Semantic),
          [](const std::string& text) {
            ExplanationReply r = parse_explanation_reply(text);
            if (r.premises.empty()) throw ParseFailure("reply lists no premises", text);
            return r;
          });
  SemanticResult out;
  out.hypothesis = parse_hypothesis_label(reply.hypothesis_label);
  for (auto& p : reply.premises) out.facts.push_back({ids.next(), std::move(p)});
  return out;
}

Autoformalization autoformalize(std::span<const NlFact> facts, const SemanticFrame& frame,
                                ChatClient& client, const ChatParams& params) {
  if (facts.empty()) throw AutoformalizationEmpty("no facts to formalize");
  Autoformalization out;
  const ChatParams p = with_purpose(params, PromptRole::Autoformalize);
  for (const NlFact& fact : facts) {
    auto messages = render_prompt(PromptRole::Autoformalize, {{"statement", frame.statement},
                                                              {"frame", describe_frame(frame)},
                                                              {"facts", fact.text}});
    std::string reply = client.complete(messages, p);
    RulesReply parsed = parse_rules_reply(reply);
    if (!parsed.bad_lines.empty()) {
      messages.push_back({"assistant", reply});
      messages.push_back({"user", "Some lines were not valid rules. Answer again with one rule per line."});
      parsed = parse_rules_reply(client.complete(messages, p));
    }
    for (const auto& bad : parsed.bad_lines)
      out.warnings.push_back("fact " + fact.id + ": dropped unparsable line: " + bad);
    if (parsed.rules.empty()) out.warnings.push_back("fact " + fact.id + ": no rules produced");
    std::size_t n = 0;
    for (Rule& r : parsed.rules) {
      r.id = fact.id + "_r" + std::to_string(++n);
      r.origin = RuleOrigin::generated(fact.id);
      out.rules.push_back(std::move(r));
    }
  }
  if (out.rules.empty()) throw AutoformalizationEmpty("no rule parsed from any fact");
  return out;
}

std::vector<NlFact> abductive_inference(std::span<const NlFact> kept_facts,
                                        std::span<const NlFact> existing_facts,
                                        MoralViolation hypothesis, const SemanticFrame& frame,
                                        ChatClient& client, const ChatParams& params,
                                        FactNumbering& ids) {
  auto messages = render_prompt(PromptRole::Abduce, {{"statement", frame.statement},
                                                     {"hypothesis", std::string(to_string(hypothesis))},
                                                     {"facts", facts_block(kept_facts)}});
  ExplanationReply reply = ask(client, std::move(messages), with_purpose(params, PromptRole::Abduce),
                               [](const std::string& text) { return parse_explanation_reply(text); });
  std::set<std::string> seen;
  for (const auto& f : existing_facts) seen.insert(fact_key(f.text));
  for (const auto& f : kept_facts) seen.insert(fact_key(f.text));
  std::vector<NlFact> out;
  for (auto& premise : reply.premises) {
    if (!seen.insert(fact_key(premise)).second) continue;
    out.push_back({ids.next(), std::move(premise)});
  }
  return out;
}

MoralViolation deductive_inference(std::span<const NlFact> facts, ChatClient& client,
                                   const ChatParams& params) {
  auto messages = render_prompt(PromptRole::Deduce,
                                {{"principles", std::string(foundation_definitions())},
                                 {"facts", facts_block(facts)}});
  std::string label =
      ask(client, std::move(messages), with_purpose(params, PromptRole::Deduce),
          [](const std::string& text) {
            const std::size_t h = find_label(text, "hypothesis:");
            if (h == std::string::npos) throw ParseFailure("reply has no 'Hypothesis:' line", text);
            std::string_view rest = std::string_view(text).substr(h + 11);
            std::string l = trim(rest.substr(0, rest.find('\n')));
            if (l.empty()) throw ParseFailure("empty hypothesis label", text);
            return l;
          });
  return parse_hypothesis_label(label);
}

namespace {

// Forwards to the real client and keeps a copy of each exchange.
class RecordingClient : public ChatClient {
 public:
  explicit RecordingClient(ChatClient& inner) : inner_(inner) {}

  std::string complete(const std::vector<ChatMessage>& messages, const ChatParams& params) override {
    std::string reply = inner_.complete(messages, params);
    log_.push_back({params.purpose, render_messages(messages), reply});
    return reply;
  }

  std::vector<Exchange> take() { return std::exchange(log_, {}); }

 private:
  ChatClient& inner_;
  std::vector<Exchange> log_;
};

std::vector<NlFact> select(std::span<const NlFact> facts, const std::set<std::string>& ids) {
  std::vector<NlFact> out;
  for (const auto& f : facts)
    if (ids.contains(f.id)) out.push_back(f);
  return out;
}

}  // namespace

RefineResult refine_loop(const RefineSeed& seed, const RefineConfig& config, ChatClient& client,
                         const EmbeddingStore& store) {
  if (config.max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
  config.solver.validate();

  RefineResult result;
  result.final_case = seed.base;
  EthicalCase& current = result.final_case;
  RecordingClient recorder(client);
  FactNumbering ids;
  ids.observe(current.nl_facts);
  std::map<std::string, std::vector<Rule>> formalized = seed.formalized;
  const std::vector<Rule> srl = frame_to_facts(current.frame);
  const int n = config.max_iterations;

  // Verifies `current` against its cached formalization, filling the cache
  // for facts seen for the first time.
  auto verify = [&](IterationRecord& rec, bool allow_llm) {
    std::vector<NlFact> missing;
    for (const auto& f : current.nl_facts)
      if (!formalized.contains(f.id)) missing.push_back(f);
    if (!missing.empty()) {
      if (!allow_llm) throw ConfigError("confirmation pass found unformalized facts");
      Autoformalization af = autoformalize(missing, current.frame, recorder, config.params);
      for (const auto& f : missing) formalized[f.id];
      for (auto& r : af.rules) formalized[r.origin.fact_id].push_back(std::move(r));
      rec.warnings.insert(rec.warnings.end(), af.warnings.begin(), af.warnings.end());
    }
    std::vector<Rule> generated;
    for (const auto& f : current.nl_facts) {
      const auto& rules = formalized.at(f.id);
      generated.insert(generated.end(), rules.begin(), rules.end());
    }
    KnowledgeBase kb = assemble_kb(config.library, srl, generated, config.open_goals);
    RuleDocument snapshot{kb.rules(), kb.goals(), {}};
    rec.kb_snapshot = serialize(snapshot);
    ++result.solver_calls;
    rec.outcome = verify_case(current, kb, store, config.solver);
    return kb;
  };

  std::vector<NlFact> added;
  try {
    if (current.nl_facts.empty()) {
      SemanticResult sem = semantic_inference(current.frame, recorder, config.params, ids);
      current.nl_facts = std::move(sem.facts);
      current.hypothesis = sem.hypothesis;
    }
    for (int t = 0; t <= n; ++t) {
      IterationRecord rec;
      rec.iteration = t;
      rec.explanation = current.nl_facts;
      rec.hypothesis = current.hypothesis;
      rec.added_facts = std::move(added);
      KnowledgeBase kb;
      try {
        kb = verify(rec, true);
      } catch (...) {
        rec.exchanges = recorder.take();
        result.trace.iterations.push_back(std::move(rec));
        throw;
      }
      rec.exchanges = recorder.take();
      const VerificationOutcome outcome = rec.outcome;

      if (outcome.valid()) {
        if (outcome.kind == OutcomeKind::ValidRedundant) {
          rec.pruned_fact_ids = outcome.unused_fact_ids;
          current.nl_facts = select(current.nl_facts, facts_in_proof(outcome.proof->result, kb));
          result.trace.iterations.push_back(std::move(rec));
          if (t < n) {
            IterationRecord confirm;
            confirm.iteration = t + 1;
            confirm.confirmation = true;
            confirm.explanation = current.nl_facts;
            confirm.hypothesis = current.hypothesis;
            verify(confirm, false);
            result.trace.iterations.push_back(std::move(confirm));
          }
        } else {
          result.trace.iterations.push_back(std::move(rec));
        }
        break;
      }
      result.trace.iterations.push_back(std::move(rec));
      if (t == n) break;

      // filter(E): the facts of the last proof, if any.
      std::vector<NlFact> kept;
      if (outcome.proof) kept = select(current.nl_facts, facts_in_proof(outcome.proof->result, kb));
      ++result.abduction_calls;
      std::vector<NlFact> missing = abductive_inference(kept, current.nl_facts, current.hypothesis,
                                                        current.frame, recorder, config.params, ids);
      std::vector<NlFact> next = missing;
      next.insert(next.end(), kept.begin(), kept.end());
      if (next.empty()) throw AutoformalizationEmpty("abduction left the explanation empty");
      current.hypothesis = deductive_inference(next, recorder, config.params);
      current.nl_facts = std::move(next);
      added = std::move(missing);
      // The abduction and deduction exchanges stay in the recorder and land in
      // the next iteration's record.
    }
  } catch (const Error& e) {
    result.trace.error = e.what();
    if (!result.trace.iterations.empty()) {
      auto& last = result.trace.iterations.back().exchanges;
      for (auto& x : recorder.take()) last.push_back(std::move(x));
    }
  }
  return result;
}

nlohmann::json trace_to_json(const RefineResult& result) {
  using nlohmann::json;
  auto facts_json = [](std::span<const NlFact> facts) {
    json out = json::array();
    for (const auto& f : facts) out.push_back({{"id", f.id}, {"text", f.text}});
    return out;
  };
  json iterations = json::array();
  for (const auto& rec : result.trace.iterations) {
    json exchanges = json::array();
    for (const auto& x : rec.exchanges)
      exchanges.push_back({{"purpose", x.purpose}, {"prompt", x.prompt}, {"response", x.response}});
    iterations.push_back({{"iteration", rec.iteration},
                          {"confirmation", rec.confirmation},
                          {"explanation", facts_json(rec.explanation)},
                          {"hypothesis", std::string(to_string(rec.hypothesis))},
                          {"outcome", outcome_to_json(rec.outcome)},
                          {"added_facts", facts_json(rec.added_facts)},
                          {"pruned_fact_ids", rec.pruned_fact_ids},
                          {"warnings", rec.warnings},
                          {"kb", rec.kb_snapshot},
                          {"exchanges", std::move(exchanges)}});
  }
  return {{"case", case_to_json(result.final_case)},
          {"iterations", std::move(iterations)},
          {"solver_calls", result.solver_calls},
          {"abduction_calls", result.abduction_calls},
          {"error", result.trace.error ? json(*result.trace.error) : json(nullptr)}};
}

}  // namespace softprove

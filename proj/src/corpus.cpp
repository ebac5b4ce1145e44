#include "softprove/corpus.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "softprove/errors.hpp"
#include "softprove/json_io.hpp"

namespace softprove {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded()) throw SchemaError({path + ": not valid JSON"});
  return doc;
}

std::string resolve(const std::string& base_file, const std::string& relative) {
  fs::path p(relative);
  if (p.is_absolute()) return p.string();
  return (fs::path(base_file).parent_path() / p).lexically_normal().string();
}

}  // namespace

CaseFile load_case_file(const std::string& path) {
  json doc = read_json_file(path);
  CaseFile out;
  out.path = path;
  out.ethical_case = case_from_json(doc);
  if (auto t = doc.find("transcript"); t != doc.end() && !t->is_null()) {
    if (!t->is_string()) throw SchemaError({"key 'transcript' must be a string"});
    out.transcript = resolve(path, t->get<std::string>());
  }
  if (auto f = doc.find("formalized"); f != doc.end() && !f->is_null()) {
    if (!f->is_array()) throw SchemaError({"key 'formalized' must be an array"});
    std::vector<std::string> problems;
    for (const auto& item : *f) {
      if (!item.is_object() || !item.contains("fact_id") || !item["fact_id"].is_string() ||
          !item.contains("rules") || !item["rules"].is_array()) {
        problems.push_back("each formalized entry needs 'fact_id' and 'rules'");
        continue;
      }
      const std::string fact_id = item["fact_id"].get<std::string>();
      auto& rules = out.formalized[fact_id];
      for (const auto& text : item["rules"]) {
        if (!text.is_string()) {
          problems.push_back(fact_id + ": rules must be strings");
          continue;
        }
        try {
          Rule r = parse_rule(text.get<std::string>());
          r.id = fact_id + "_r" + std::to_string(rules.size() + 1);
          r.origin = RuleOrigin::generated(fact_id);
          rules.push_back(std::move(r));
        } catch (const Error& e) {
          problems.push_back(fact_id + ": " + e.what());
        }
      }
    }
    if (!problems.empty()) throw SchemaError(std::move(problems));
  }
  if (!out.transcript) {
    for (const auto& fact : out.ethical_case.nl_facts)
      if (!out.formalized.contains(fact.id))
        throw SchemaError({"fact '" + fact.id + "' has no formalized rules and no transcript is given"});
  }
  return out;
}

CorpusManifest load_manifest(const std::string& path) {
  json doc = read_json_file(path);
  if (!doc.is_object()) throw SchemaError({"manifest must be a JSON object"});
  CorpusManifest m;
  std::vector<std::string> problems;
  if (auto r = doc.find("report"); r != doc.end() && !r->is_null()) {
    if (r->is_string()) m.report = resolve(path, r->get<std::string>());
    else problems.push_back("key 'report' must be a string");
  }
  auto cases = doc.find("cases");
  if (cases == doc.end() || !cases->is_array()) {
    problems.push_back("key 'cases' must be an array");
  } else {
    for (const auto& c : *cases) {
      if (!c.is_object() || !c.contains("path") || !c["path"].is_string()) {
        problems.push_back("each case needs a string 'path'");
        continue;
      }
      std::string split = c.value("split", std::string("easy"));
      if (split != "easy" && split != "hard") {
        problems.push_back("split must be 'easy' or 'hard', got '" + split + "'");
        continue;
      }
      m.cases.push_back({resolve(path, c["path"].get<std::string>()), split});
    }
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return m;
}

namespace {

CaseReport run_case(const ManifestEntry& entry, const CorpusOptions& options,
                    const EmbeddingStore& store) {
  CaseReport report;
  report.path = entry.path;
  report.split = entry.split;
  try {
    CaseFile file = load_case_file(entry.path);
    report.id = file.ethical_case.id;
    RefineSeed seed{file.ethical_case, file.formalized};
    RefineConfig config = options.refine;
    std::optional<MockTranscript> mock;
    if (file.transcript) {
      mock.emplace(MockTranscript::from_file(*file.transcript, true));
    } else {
      // Verification only; an empty strict mock turns any LLM call into an error.
      mock.emplace(std::vector<MockTranscript::Entry>{}, true);
      config.max_iterations = 0;
    }
    RefineResult result = refine_loop(seed, config, *mock, store);
    report.trace = trace_to_json(result);
    for (const auto& rec : result.trace.iterations) report.outcomes.push_back(rec.outcome.kind);
    if (result.trace.error) report.error = *result.trace.error;
  } catch (const Error& e) {
    report.error = e.what();
  }
  return report;
}

}  // namespace

CorpusReport verify_corpus(const CorpusManifest& manifest, const CorpusOptions& options,
                           const EmbeddingStore& store) {
  CorpusReport out;
  out.cases.resize(manifest.cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.cases.size(); i = next++)
      out.cases[i] = run_case(manifest.cases[i], options, store);
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(manifest.cases.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (const auto& c : out.cases)
    if (!c.error && !c.outcomes.empty())
      out.iterations = std::max(out.iterations, static_cast<int>(c.outcomes.size()));
  std::vector<std::pair<int, OutcomeKind>> all;
  std::map<std::string, std::vector<std::pair<int, OutcomeKind>>> by_split;
  for (const auto& c : out.cases) {
    if (c.error || c.outcomes.empty()) continue;
    for (int t = 0; t < out.iterations; ++t) {
      OutcomeKind k = c.outcomes[std::min<std::size_t>(t, c.outcomes.size() - 1)];
      all.emplace_back(t, k);
      by_split[c.split].emplace_back(t, k);
    }
  }
  out.overall = aggregate_metrics(all);
  for (const char* split : {"easy", "hard"}) {
    auto it = by_split.find(split);
    if (it != by_split.end()) out.per_split[split] = aggregate_metrics(it->second);
  }
  return out;
}

json corpus_report_to_json(const CorpusReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    json outcomes = json::array();
    for (auto k : c.outcomes) outcomes.push_back(std::string(to_string(k)));
    cases.push_back({{"id", c.id},
                     {"path", c.path},
                     {"split", c.split},
                     {"error", c.error ? json(*c.error) : json(nullptr)},
                     {"outcomes", std::move(outcomes)}});
  }
  json splits = json::object();
  for (const auto& [name, m] : report.per_split) splits[name] = metrics_to_json(m);
  return {{"cases", std::move(cases)}, {"overall", metrics_to_json(report.overall)}, {"splits", std::move(splits)}};
}

std::string render_corpus_report(const CorpusReport& report) {
  std::string out = render_metrics_table(report.overall, "all cases");
  for (const auto& [name, m] : report.per_split) out += "\n" + render_metrics_table(m, name + " cases");
  for (const auto& c : report.cases)
    if (c.error) out += "\nerror in " + c.path + ": " + *c.error;
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out;
}

}  // namespace softprove

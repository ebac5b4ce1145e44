#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "softprove/bench.hpp"
#include "softprove/chat_client.hpp"
#include "softprove/config.hpp"
#include "softprove/corpus.hpp"
#include "softprove/embeddings.hpp"
#include "softprove/errors.hpp"
#include "softprove/json_io.hpp"
#include "softprove/principles.hpp"
#include "softprove/prover.hpp"
#include "softprove/refine.hpp"
#include "softprove/ruleparse.hpp"
#include "softprove/verifier.hpp"

using namespace softprove;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInputError = 1, kConfigError = 2, kNoProof = 3, kClientError = 4 };

// Settings given on the command line; absent options never override the
// environment or the config file.
struct FlagSettings {
  std::map<std::string, std::optional<std::string>> values;
  std::map<std::string, bool> switches;

  void option(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    app->add_option(name, values[key], help);
  }
  void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    switches[key] = false;
    app->add_flag(name, switches[key], help);
  }

  Settings collect() const {
    Settings out;
    for (const auto& [k, v] : values)
      if (v) out[k] = *v;
    for (const auto& [k, on] : switches)
      if (on) out[k] = "true";
    return out;
  }
};

struct Common {
  bool json = false;
  std::string config_file;
  FlagSettings flags;
};

void add_common(CLI::App* app, Common& c) {
  app->add_flag("--json", c.json, "Print machine-readable JSON");
  app->add_option("--config", c.config_file, "key=value configuration file");
}

void add_solver_flags(CLI::App* app, Common& c) {
  c.flags.option(app, "--unify-threshold", "unify_threshold", "Minimum predicate similarity (default 0.5)");
  c.flags.option(app, "--proof-threshold", "proof_threshold", "Minimum proof score (default 0.13)");
  c.flags.option(app, "--max-depth", "max_depth", "Depth limit, root at depth 1 (default 10)");
  c.flags.option(app, "--max-proofs", "max_proofs", "Complete proofs enumerated per goal (default 10000)");
  c.flags.option(app, "--embeddings", "embeddings", "GloVe-format text file");
  c.flags.option(app, "--principles", "principles", "Principle library replacing the built-in one");
  c.flags.flag(app, "--weak-constants", "weak_constants", "Weakly unify mismatched constants");
  c.flags.flag(app, "--open-goals", "open_goals", "Use variables as goal arguments");
  c.flags.flag(app, "--strict-threshold", "strict_threshold", "Require score > proof threshold");
}

AppConfig load_config(const Common& c) {
  const char* env_file = std::getenv("SOFTPROVE_CONFIG");
  std::string path = !c.config_file.empty() ? c.config_file : (env_file ? env_file : "");
  Settings file = path.empty() ? Settings{} : read_config_file(path);
  return resolve_config(file, environment_settings(), c.flags.collect());
}

EmbeddingStore load_store(const AppConfig& cfg) {
  if (!cfg.embeddings_path) {
    std::cerr << "warning: no embeddings given; only identical symbols unify\n";
    return EmbeddingStore(1);
  }
  return load_embeddings_file(*cfg.embeddings_path);
}

RuleDocument load_library(const AppConfig& cfg) {
  if (cfg.principles_path) return load_principles(*cfg.principles_path);
  return parse_principles(default_principles_text());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json document_json(const RuleDocument& doc) {
  json rules = json::array();
  for (const auto& r : doc.rules) rules.push_back(rule_to_json(r));
  json goals = json::array();
  for (const auto& g : doc.goal_decls) goals.push_back(to_string(g.goal_atom));
  return {{"rules", std::move(rules)}, {"goals", std::move(goals)}};
}

// ---- commands ---------------------------------------------------------------

int cmd_parse(const Common& c, const std::string& path) {
  RuleDocument doc = parse_kb(read_file(path));
  if (c.json) {
    json out = document_json(doc);
    out["file"] = path;
    print_json(out);
  } else {
    std::cout << serialize(doc);
  }
  return kOk;
}

int cmd_prove(const Common& c, const std::string& path, bool no_principles) {
  AppConfig cfg = load_config(c);
  RuleDocument doc = parse_kb(read_file(path));
  RuleDocument library = load_library(cfg);
  KnowledgeBase kb;
  if (!no_principles) kb.add_all(library.rules);
  kb.add_all(doc.rules);
  const auto& goals = doc.goal_decls.empty() ? library.goal_decls : doc.goal_decls;
  for (const auto& g : goals) kb.add_goal(cfg.open_goals ? open_goal(g) : g);
  if (kb.goals().empty()) throw ConfigError("no goals declared");
  EmbeddingStore store = load_store(cfg);
  auto best = prove_all_goals(kb, kb.goals(), store, cfg.solver);
  if (c.json) {
    json out = {{"file", path}, {"proved", best.has_value()},
                {"proof", best ? hypothesis_to_json(*best) : json(nullptr)}};
    print_json(out);
  } else if (best) {
    std::cout << render_proof(best->result);
    for (auto i : best->budget_exceeded_goals)
      std::cerr << "warning: proof budget exceeded for goal " << to_string(kb.goals()[i].goal_atom) << "\n";
  } else {
    std::cout << "no proof\n";
  }
  return best ? kOk : kNoProof;
}

RefineConfig refine_config(const AppConfig& cfg) {
  RefineConfig rc;
  rc.max_iterations = cfg.max_iterations;
  rc.solver = cfg.solver;
  rc.library = load_library(cfg);
  rc.open_goals = cfg.open_goals;
  rc.params = cfg.chat;
  return rc;
}

int cmd_verify(const Common& c, const std::string& case_path) {
  AppConfig cfg = load_config(c);
  CaseFile file = load_case_file(case_path);
  if (!file.transcript && file.ethical_case.nl_facts.empty())
    throw SchemaError({"case has no facts"});
  EmbeddingStore store = load_store(cfg);
  RefineConfig rc = refine_config(cfg);
  rc.max_iterations = 0;
  std::optional<MockTranscript> mock;
  if (file.transcript) mock.emplace(MockTranscript::from_file(*file.transcript));
  else mock.emplace(std::vector<MockTranscript::Entry>{});
  RefineResult result = refine_loop({file.ethical_case, file.formalized}, rc, *mock, store);
  if (result.trace.error) {
    std::cerr << "error: " << *result.trace.error << "\n";
    return kClientError;
  }
  const VerificationOutcome& outcome = result.trace.iterations.front().outcome;
  if (c.json) {
    json out = outcome_to_json(outcome);
    out["case"] = file.ethical_case.id;
    out["hypothesis"] = std::string(to_string(file.ethical_case.hypothesis));
    print_json(out);
  } else {
    std::cout << file.ethical_case.id << ": " << to_string(outcome.kind);
    if (outcome.entailed) std::cout << " (entailed " << to_string(*outcome.entailed) << ")";
    if (!outcome.unused_fact_ids.empty()) {
      std::cout << " unused:";
      for (const auto& id : outcome.unused_fact_ids) std::cout << " " << id;
    }
    std::cout << "\n";
    if (outcome.proof) std::cout << render_proof(outcome.proof->result);
  }
  return kOk;
}

int cmd_refine(const Common& c, const std::string& case_path, const std::string& mock_path,
               bool live, bool lenient, const std::string& trace_out) {
  AppConfig cfg = load_config(c);
  if (live == !mock_path.empty()) throw ConfigError("give exactly one of --mock or --live");
  CaseFile file = load_case_file(case_path);
  EmbeddingStore store = load_store(cfg);
  RefineConfig rc = refine_config(cfg);
  std::unique_ptr<ChatClient> client;
  if (live) client = std::make_unique<HttpChatClient>(HttpChatClient::from_environment());
  else client = std::make_unique<MockTranscript>(MockTranscript::from_file(mock_path, !lenient));
  RefineResult result = refine_loop({file.ethical_case, file.formalized}, rc, *client, store);
  json trace = trace_to_json(result);
  if (!trace_out.empty()) {
    std::ofstream out(trace_out, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + trace_out);
    out << trace.dump(2) << "\n";
  }
  if (c.json) {
    print_json(trace);
  } else {
    for (const auto& rec : result.trace.iterations) {
      std::cout << "iteration " << rec.iteration << (rec.confirmation ? " (pruned)" : "") << ": "
                << to_string(rec.outcome.kind) << ", " << rec.explanation.size() << " facts, hypothesis "
                << to_string(rec.hypothesis) << "\n";
      for (const auto& f : rec.explanation) std::cout << "  " << f.id << " " << f.text << "\n";
      for (const auto& w : rec.warnings) std::cerr << "warning: " << w << "\n";
    }
  }
  if (result.trace.error) {
    std::cerr << "error: " << *result.trace.error << "\n";
    return kClientError;
  }
  return kOk;
}

int cmd_corpus_verify(const Common& c, const std::string& manifest_path) {
  AppConfig cfg = load_config(c);
  CorpusManifest manifest = load_manifest(manifest_path);
  EmbeddingStore store = load_store(cfg);
  CorpusOptions options{refine_config(cfg), cfg.jobs};
  CorpusReport report = verify_corpus(manifest, options, store);
  json j = corpus_report_to_json(report);
  if (manifest.report) {
    std::ofstream out(*manifest.report, std::ios::binary);
    if (!out) throw ConfigError("cannot write report " + *manifest.report);
    out << j.dump(2) << "\n";
  }
  if (c.json) print_json(j);
  else std::cout << render_corpus_report(report);
  for (const auto& cr : report.cases)
    if (cr.error) std::cerr << "case " << cr.path << ": " << *cr.error << "\n";
  return kOk;
}

int cmd_bench(const Common& c, std::size_t rules, int runs) {
  AppConfig cfg = load_config(c);
  if (rules < 1) throw ConfigError("--rules must be at least 1");
  BenchReport r = run_bench(rules, cfg.seed, cfg.solver, runs);
  if (c.json) {
    print_json({{"rule_count", r.rule_count}, {"runs", r.seconds.size()}, {"seconds", r.seconds},
                {"median_seconds", r.median_seconds}, {"proved", r.proved}, {"seed", cfg.seed}});
  } else {
    std::cout << r.rule_count << " rules, median " << r.median_seconds << " s over " << r.seconds.size()
              << " runs" << (r.proved ? "" : " (no proof)") << "\n";
  }
  return kOk;
}

int cmd_embeddings_cache(const Common& c, const std::string& source, std::string out) {
  if (out.empty()) out = source + ".spemb";
  EmbeddingStore store = load_embeddings_cached(source, out);
  if (c.json) {
    print_json({{"source", source}, {"cache", out}, {"dimension", store.dimension()},
                {"vocab_size", store.vocab_size()}});
  } else {
    std::cout << out << ": " << store.vocab_size() << " tokens, dimension " << store.dimension() << "\n";
  }
  return kOk;
}

void print_diagnostics(const std::string& file, const DocumentError& e) {
  for (const auto& d : e.diagnostics())
    std::cerr << file << ":" << d.message << "\n";  // message starts with line:column
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify and refine moral explanations with a weak-unification prover"};
  app.require_subcommand(1);
  Common common;
  std::string path;

  auto* parse = app.add_subcommand("parse", "Parse a rule file and print it canonically");
  add_common(parse, common);
  parse->add_option("file", path, "Rule file")->required();

  bool no_principles = false;
  auto* prove = app.add_subcommand("prove", "Prove the goals of a rule file");
  add_common(prove, common);
  add_solver_flags(prove, common);
  prove->add_option("file", path, "Rule file")->required();
  prove->add_flag("--no-principles", no_principles, "Do not add the principle library");

  auto* verify = app.add_subcommand("verify", "Classify one case's explanation");
  add_common(verify, common);
  add_solver_flags(verify, common);
  verify->add_option("--case", path, "Case JSON")->required();

  std::string mock_path, trace_out;
  bool live = false, lenient = false;
  auto* refine = app.add_subcommand("refine", "Run the refinement loop on a case");
  add_common(refine, common);
  add_solver_flags(refine, common);
  refine->add_option("--case", path, "Case JSON")->required();
  refine->add_option("--mock", mock_path, "Transcript replayed instead of a live model");
  refine->add_flag("--live", live, "Use SOFTPROVE_LLM_URL / SOFTPROVE_LLM_KEY");
  refine->add_flag("--lenient", lenient, "Unmatched mock prompts get an empty reply");
  refine->add_option("--trace-out", trace_out, "Write the trace JSON here");
  common.flags.option(refine, "--max-iterations", "max_iterations", "Refinement rounds (default 3)");

  auto* corpus = app.add_subcommand("corpus", "Corpus commands");
  corpus->require_subcommand(1);
  auto* corpus_verify = corpus->add_subcommand("verify", "Verify every case of a manifest");
  add_common(corpus_verify, common);
  add_solver_flags(corpus_verify, common);
  corpus_verify->add_option("--manifest", path, "Manifest JSON")->required();
  common.flags.option(corpus_verify, "--jobs", "jobs", "Parallel cases");
  common.flags.option(corpus_verify, "--max-iterations", "max_iterations", "Refinement rounds (default 3)");

  std::size_t rules = 1000;
  int runs = 10;
  auto* bench = app.add_subcommand("bench", "Time proof search on a synthetic knowledge base");
  add_common(bench, common);
  add_solver_flags(bench, common);
  bench->add_option("--rules", rules, "Rules and facts in the synthetic KB");
  bench->add_option("--runs", runs, "Timed runs");
  common.flags.option(bench, "--seed", "seed", "Generator seed");

  std::string cache_out;
  auto* embeddings = app.add_subcommand("embeddings", "Embedding commands");
  embeddings->require_subcommand(1);
  auto* cache = embeddings->add_subcommand("cache", "Build or refresh the binary cache of a GloVe file");
  add_common(cache, common);
  cache->add_option("file", path, "GloVe text file")->required();
  cache->add_option("--out", cache_out, "Cache path (default <file>.spemb)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (parse->parsed()) return cmd_parse(common, path);
    if (prove->parsed()) return cmd_prove(common, path, no_principles);
    if (verify->parsed()) return cmd_verify(common, path);
    if (refine->parsed()) return cmd_refine(common, path, mock_path, live, lenient, trace_out);
    if (corpus_verify->parsed()) return cmd_corpus_verify(common, path);
    if (bench->parsed()) return cmd_bench(common, rules, runs);
    if (cache->parsed()) return cmd_embeddings_cache(common, path, cache_out);
  } catch (const DocumentError& e) {
    print_diagnostics(path, e);
    return kInputError;
  } catch (const SchemaError& e) {
    for (const auto& p : e.problems()) std::cerr << path << ": " << p << "\n";
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ClientError& e) {
    std::cerr << "client error: " << e.what() << "\n";
    return kClientError;
  } catch (const ParseFailure& e) {
    std::cerr << "client error: " << e.what() << "\n";
    return kClientError;
  } catch (const UnknownViolation& e) {
    std::cerr << "client error: " << e.what() << "\n";
    return kClientError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kConfigError;
}

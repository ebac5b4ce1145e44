#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "softprove/refine.hpp"
#include "softprove/verifier.hpp"

namespace softprove {

/// A case as stored on disk: the case itself plus either its autoformalized
/// rules or a transcript that can produce them.
struct CaseFile {
  std::string path;
  EthicalCase ethical_case;
  std::map<std::string, std::vector<Rule>> formalized;
  std::optional<std::string> transcript;  ///< resolved against the case file's directory
};

/// Throws ConfigError when unreadable, SchemaError when malformed.
CaseFile load_case_file(const std::string& path);

struct ManifestEntry {
  std::string path;
  std::string split;  ///< "easy" or "hard"
};

struct CorpusManifest {
  std::optional<std::string> report;
  std::vector<ManifestEntry> cases;
};

/// `{"report": path?, "cases": [{"path", "split"}]}`; paths are resolved
/// against the manifest's directory.
CorpusManifest load_manifest(const std::string& path);

struct CaseReport {
  std::string id;
  std::string path;
  std::string split;
  std::optional<std::string> error;
  /// Outcome per iteration, the last one carried forward to `iterations`.
  std::vector<OutcomeKind> outcomes;
  nlohmann::json trace;
};

struct CorpusReport {
  std::vector<CaseReport> cases;
  std::map<std::string, MetricsReport> per_split;
  MetricsReport overall;
  int iterations = 0;
};

struct CorpusOptions {
  RefineConfig refine;
  int jobs = 1;
};

/// Runs every case: with its transcript through refine_loop, otherwise as a
/// single verification of its shipped formalization. Case failures are
/// recorded and do not stop the run. Output order follows the manifest.
CorpusReport verify_corpus(const CorpusManifest& manifest, const CorpusOptions& options,
                           const EmbeddingStore& store);

nlohmann::json corpus_report_to_json(const CorpusReport& report);
std::string render_corpus_report(const CorpusReport& report);

}  // namespace softprove

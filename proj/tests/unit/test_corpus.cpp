#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "softprove/corpus.hpp"
#include "softprove/errors.hpp"
#include "softprove/principles.hpp"

using namespace softprove;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = SOFTPROVE_DATA_DIR;

const EmbeddingStore& fixture() {
  static const EmbeddingStore store = load_embeddings_file(kData + "/embeddings/fixture-64d.txt");
  return store;
}

json frog_json() {
  std::ifstream in(kData + "/cases/frog.case.json");
  return json::parse(in);
}

void write(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump(2);
}

// Four verify-only cases: two valid and minimal, one redundant, one unprovable.
fs::path make_corpus() {
  const fs::path dir = fs::temp_directory_path() / "softprove_corpus_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  json a = frog_json();
  json b = frog_json();
  b["id"] = "frog2";
  json c = frog_json();
  c["id"] = "frog_redundant";
  c["facts"].push_back({{"id", "f4"}, {"text", "The sky is blue."}});
  c["formalized"].push_back({{"fact_id", "f4"}, {"rules", {"sky_is_blue(action)."}}});
  json d = {{"id", "song"},
            {"statement", "I sang a song"},
            {"frame", {{"statement", "I sang a song"}, {"action", "sing"}, {"agent", "I"}, {"patient", "a song"}}},
            {"facts", {{{"id", "f1"}, {"text", "Singing is an activity."}}}},
            {"hypothesis", "care"},
            {"formalized", {{{"fact_id", "f1"}, {"rules", {"activity(X) :- sing(X)."}}}}}};
  write(dir / "a.case.json", a);
  write(dir / "b.case.json", b);
  write(dir / "c.case.json", c);
  write(dir / "d.case.json", d);
  write(dir / "manifest.json", {{"cases",
                                 {{{"path", "a.case.json"}, {"split", "easy"}},
                                  {{"path", "b.case.json"}, {"split", "hard"}},
                                  {{"path", "c.case.json"}, {"split", "easy"}},
                                  {{"path", "d.case.json"}, {"split", "hard"}}}}});
  return dir;
}

CorpusOptions options(int jobs) {
  CorpusOptions o;
  o.refine.library = parse_principles(default_principles_text());
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST_CASE("manifest loading") {
  const fs::path dir = make_corpus();
  CorpusManifest m = load_manifest((dir / "manifest.json").string());
  REQUIRE(m.cases.size() == 4);
  CHECK(m.cases[0].path == (dir / "a.case.json").string());
  CHECK(m.cases[1].split == "hard");

  write(dir / "bad.json", {{"cases", {{{"path", "x"}, {"split", "medium"}}}}});
  CHECK_THROWS_AS(load_manifest((dir / "bad.json").string()), SchemaError);
  CHECK_THROWS_AS(load_manifest((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("corpus metrics over a constructed corpus") {
  const fs::path dir = make_corpus();
  CorpusManifest m = load_manifest((dir / "manifest.json").string());
  CorpusReport r = verify_corpus(m, options(1), fixture());
  REQUIRE(r.cases.size() == 4);
  CHECK(r.cases[0].outcomes == std::vector<OutcomeKind>{OutcomeKind::ValidNonRedundant});
  CHECK(r.cases[2].outcomes == std::vector<OutcomeKind>{OutcomeKind::ValidRedundant});
  CHECK(r.cases[3].outcomes == std::vector<OutcomeKind>{OutcomeKind::InvalidNoProof});
  for (const auto& c : r.cases) CHECK_FALSE(c.error);
  CHECK(format_tenths(r.overall.overall.valid_tenths()) == "75.0");
  CHECK(format_tenths(r.overall.overall.invalid_tenths()) == "25.0");
  CHECK(format_tenths(r.overall.overall.non_redundant_tenths()) == "66.7");
  CHECK(format_tenths(r.overall.overall.redundant_tenths()) == "33.3");
  CHECK(r.per_split.at("easy").overall.total == 2);
  CHECK(r.per_split.at("hard").overall.valid == 1);

  const std::string text = render_corpus_report(r);
  const auto v = text.find("Valid"), inv = text.find("Invalid"), nr = text.find("Valid and non-Redundant"),
             red = text.find("Valid but Redundant");
  CHECK(v < inv);
  CHECK(inv < nr);
  CHECK(nr < red);
  CHECK(text.find("75.0") != std::string::npos);
}

TEST_CASE("parallel runs give identical reports") {
  const fs::path dir = make_corpus();
  json manifest = {{"cases", json::array()}};
  for (const char* n : {"a", "b", "c", "d"}) manifest["cases"].push_back({{"path", std::string(n) + ".case.json"}});
  manifest["cases"].push_back({{"path", kData + "/cases/prison.case.json"}, {"split", "hard"}});
  write(dir / "mixed.json", manifest);
  CorpusManifest m = load_manifest((dir / "mixed.json").string());
  const std::string one = corpus_report_to_json(verify_corpus(m, options(1), fixture())).dump();
  const std::string four = corpus_report_to_json(verify_corpus(m, options(4), fixture())).dump();
  CHECK(one == four);
  CorpusReport r = verify_corpus(m, options(4), fixture());
  // The prison case runs three iterations; verify-only cases carry their outcome forward.
  CHECK(r.iterations == 3);
  CHECK(r.cases[0].outcomes.size() == 1);
  REQUIRE(r.overall.per_iteration.size() == 3);
  for (const auto& [t, row] : r.overall.per_iteration) CHECK(row.total == 5);
  CHECK(r.cases[4].outcomes.back() == OutcomeKind::ValidNonRedundant);
}

TEST_CASE("failing cases are recorded and empty corpora are reported as empty") {
  const fs::path dir = make_corpus();
  write(dir / "broken.json", {{"cases", {{{"path", "nope.case.json"}}, {{"path", "a.case.json"}}}}});
  CorpusReport r = verify_corpus(load_manifest((dir / "broken.json").string()), options(2), fixture());
  REQUIRE(r.cases.size() == 2);
  CHECK(r.cases[0].error);
  CHECK_FALSE(r.cases[1].error);
  CHECK(r.overall.overall.total == 1);
  CHECK(render_corpus_report(r).find("error in") != std::string::npos);

  write(dir / "empty.json", {{"cases", json::array()}});
  CorpusReport e = verify_corpus(load_manifest((dir / "empty.json").string()), options(3), fixture());
  CHECK(e.cases.empty());
  CHECK(e.overall.empty);
  CHECK(corpus_report_to_json(e)["overall"]["empty"] == true);
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "json.hpp"
#include "kgforge/config.h"
#include "kgforge/corpus.h"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/pipeline.h"
#include "test_util.h"

using namespace kgforge;
using json = nlohmann::json;
namespace p = kgforge::pipeline;

namespace {

config::RunConfig demo_config(const testutil::TempDir &dir, const std::string &name = "demo.json") {
  auto c = config::load_config(testutil::data_dir() / "config" / name);
  c.run_dir = dir / "run";
  c.embed.index = dir / "index.kgei";
  return c;
}

std::string read(const std::filesystem::path &p) { return fs::read_file(p); }

int run_cli(const std::string &args) {
  std::string cmd = std::string(KGFORGE_CLI) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

// ---- config -----------------------------------------------------------------

TEST(Config, LoadsNestedAndResolvesPaths) {
  auto c = config::load_config(testutil::data_dir() / "config" / "demo.json");
  EXPECT_EQ(c.mode, matcher::MatchMode::Kind::kConstrained);
  EXPECT_EQ(c.cq_cap, 4u);
  EXPECT_EQ(c.workers, 2u);
  EXPECT_TRUE(c.catalog_snapshot.is_absolute());
  EXPECT_TRUE(std::filesystem::exists(c.catalog_snapshot));
  EXPECT_TRUE(std::filesystem::exists(c.llm.mock_dir));
  EXPECT_EQ(c.index_path(), std::filesystem::path(c.catalog_snapshot.string() + ".kgei"));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, FlatKeysEnvAndErrors) {
  testutil::TempDir dir;
  fs::write_atomic(dir / "c.json", R"({"mode": "unconstrained", "catalog.snapshot": "snap.jsonl",
    "run.corpus": "c.jsonl", "run.dir": "out", "llm.mock_dir": "mock", "eval.jaccard": 0.7})");
  auto c = config::load_config(dir / "c.json");
  EXPECT_EQ(c.mode, matcher::MatchMode::Kind::kUnconstrained);
  EXPECT_EQ(c.run_dir, dir / "out");
  EXPECT_DOUBLE_EQ(c.jaccard, 0.7);

  EXPECT_EQ(config::env_name("llm.mock_dir"), "KGFORGE_LLM_MOCK_DIR");
  ::setenv("KGFORGE_CQ_MAX_PER_DOC", "2", 1);
  ::setenv("KGFORGE_ONTOLOGY_SCOPE", "corpus", 1);
  auto e = config::load_config(dir / "c.json");
  ::unsetenv("KGFORGE_CQ_MAX_PER_DOC");
  ::unsetenv("KGFORGE_ONTOLOGY_SCOPE");
  EXPECT_EQ(e.cq_cap, 2u);
  EXPECT_EQ(e.scope, config::OntologyScope::kCorpus);

  EXPECT_THROW(c.set("no.such.key", 1), ConfigError);
  EXPECT_THROW(c.set("mode", "sideways"), ConfigError);
  EXPECT_THROW(c.set("eval.criterion", "fuzzy"), ConfigError);
  EXPECT_THROW(config::load_config(dir / "missing.json"), ConfigError);
  fs::write_atomic(dir / "bad.json", "{not json");
  EXPECT_THROW(config::load_config(dir / "bad.json"), ConfigError);
  config::RunConfig empty;
  EXPECT_THROW(empty.validate(), ConfigError);
  auto dumped = c.to_json().dump();
  EXPECT_EQ(dumped.find("secret"), std::string::npos);
}

TEST(Config, TargetAndAliases) {
  testutil::TempDir dir;
  auto cat = catalog::filter_catalog(catalog::load_snapshot(testutil::fixture("catalog20.jsonl")));
  fs::write_atomic(dir / "t.txt", "# target\nP19\nDateOfBirth  \n\n");
  EXPECT_EQ(config::load_target(dir / "t.txt", cat), (std::set<std::string>{"DateOfBirth", "PlaceOfBirth"}));
  fs::write_atomic(dir / "bad.txt", "P214\n");
  EXPECT_THROW(config::load_target(dir / "bad.txt", cat), ConfigError);
  fs::write_atomic(dir / "a.json", R"({"Nationality": "P27", "job": "Occupation"})");
  auto aliases = config::load_aliases(dir / "a.json", cat);
  EXPECT_EQ(aliases.at("nationality"), "CountryOfCitizenship");
  EXPECT_EQ(aliases.at("job"), "Occupation");
}

// ---- corpus -----------------------------------------------------------------

TEST(Corpus, LoadsDocumentsAndGold) {
  auto docs = corpus::load_corpus(testutil::data_dir() / "corpus" / "demo.jsonl");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].id, "firouzi");
  ASSERT_TRUE(docs[0].gold);
  EXPECT_EQ(docs[0].gold->size(), 2u);
  auto gold = corpus::load_gold(testutil::data_dir() / "corpus" / "demo_gold.jsonl");
  EXPECT_EQ(gold.at("meshkatian").size(), 3u);
  EXPECT_EQ(corpus::load_gold(testutil::data_dir() / "corpus" / "demo.jsonl"), gold);
}

TEST(Corpus, SchemaErrorsCarryLineNumbers) {
  testutil::TempDir dir;
  fs::write_atomic(dir / "c.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n\n{\"id\":\"b\"}\n");
  try {
    corpus::load_corpus(dir / "c.jsonl");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError &e) {
    EXPECT_EQ(e.record(), 3u);
  }
  fs::write_atomic(dir / "d.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
  EXPECT_THROW(corpus::load_corpus(dir / "d.jsonl"), SchemaError);
  fs::write_atomic(dir / "e.jsonl", "{\"id\":\"a/b\",\"text\":\"x\"}\n");
  EXPECT_THROW(corpus::load_corpus(dir / "e.jsonl"), SchemaError);
  EXPECT_THROW(corpus::load_corpus(dir / "missing.jsonl"), IoError);
}

// ---- pipeline ---------------------------------------------------------------

TEST(Pipeline, RunsAndResumesWithoutCalls) {
  testutil::TempDir dir;
  auto c = demo_config(dir);
  auto docs = corpus::load_corpus(c.corpus);
  auto first = p::run_pipeline(c, docs);
  EXPECT_EQ(first.count(p::Status::kDone), 2u);
  EXPECT_GT(first.counters.llm_calls, 0u);
  EXPECT_EQ(first.counters.skipped_statements, 1u);
  EXPECT_GE(first.counters.dropped_off_ontology, 1u);
  for (const char *f : {"cqs.json", "qa.json", "relations.json", "matches.json", "ontology.json",
                        "ontology.ttl", "kg_meta.json", "kg.ttl"}) {
    EXPECT_TRUE(std::filesystem::exists(c.run_dir / "firouzi" / f)) << f;
  }
  EXPECT_TRUE(std::filesystem::exists(c.run_dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(c.run_dir / "ontology.ttl"));
  std::string kg = read(c.run_dir / "firouzi" / "kg.ttl");

  auto second = p::run_pipeline(c, docs);
  EXPECT_EQ(second.counters.llm_calls, 0u);
  EXPECT_EQ(second.count(p::Status::kDone), 2u);
  for (const auto &d : second.documents) EXPECT_EQ(d.resumed_stages, 6u) << d.id;
  EXPECT_EQ(read(c.run_dir / "firouzi" / "kg.ttl"), kg);

  // A damaged artifact is recomputed from that stage on.
  fs::write_atomic(c.run_dir / "firouzi" / "relations.json", "{oops");
  auto third = p::run_pipeline(c, docs);
  EXPECT_GT(third.counters.llm_calls, 0u);
  EXPECT_EQ(read(c.run_dir / "firouzi" / "kg.ttl"), kg);
  auto manifest = json::parse(read(c.run_dir / "manifest.json"));
  EXPECT_EQ(manifest["summary"]["done"], 2);
}

TEST(Pipeline, FailureIsolatedToOneDocument) {
  testutil::TempDir dir;
  auto c = demo_config(dir);
  auto docs = corpus::load_corpus(c.corpus);
  docs.push_back(Document{"ghost", "A document no fixture knows about.", {}});
  auto m = p::run_pipeline(c, docs);
  EXPECT_EQ(m.count(p::Status::kDone), 2u);
  ASSERT_EQ(m.count(p::Status::kFailed), 1u);
  const auto &ghost = m.documents.back();
  EXPECT_EQ(ghost.id, "ghost");
  EXPECT_EQ(ghost.failed_stage, "cqs");
  EXPECT_NE(ghost.error.find("404"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(c.run_dir / "meshkatian" / "kg.ttl"));
}

TEST(Pipeline, DeterministicOutputs) {
  testutil::TempDir a, b;
  auto ca = demo_config(a), cb = demo_config(b);
  cb.workers = 1;
  auto docs = corpus::load_corpus(ca.corpus);
  p::run_pipeline(ca, docs);
  p::run_pipeline(cb, docs);
  for (const char *doc : {"firouzi", "meshkatian"}) {
    EXPECT_EQ(read(ca.run_dir / doc / "kg.ttl"), read(cb.run_dir / doc / "kg.ttl")) << doc;
  }
  EXPECT_EQ(read(ca.run_dir / "ontology.ttl"), read(cb.run_dir / "ontology.ttl"));
  auto ra = p::run_eval(ca.run_dir, *ca.gold, ca.criterion);
  p::run_eval(cb.run_dir, *cb.gold, cb.criterion);
  EXPECT_EQ(read(ca.run_dir / "eval_report.json"), read(cb.run_dir / "eval_report.json"));
  EXPECT_EQ(ra.per_doc.size(), 2u);
}

TEST(Pipeline, CorpusScopeSharesOneOntology) {
  testutil::TempDir dir;
  auto c = demo_config(dir);
  c.mode = matcher::MatchMode::Kind::kUnconstrained;
  c.scope = config::OntologyScope::kCorpus;
  auto docs = corpus::load_corpus(c.corpus);
  auto m = p::run_pipeline(c, docs);
  EXPECT_EQ(m.count(p::Status::kDone), 2u);
  std::string shared = read(c.run_dir / "ontology.ttl");
  EXPECT_NE(shared.find("wdt:TeacherOf"), std::string::npos);
  EXPECT_NE(shared.find("wdt:PlaceOfBirth"), std::string::npos);
  EXPECT_NE(read(c.run_dir / "meshkatian" / "kg.ttl").find("TeacherOf"), std::string::npos);
}

TEST(Pipeline, EvalReportsMissingKgs) {
  testutil::TempDir dir;
  auto c = demo_config(dir);
  auto docs = corpus::load_corpus(c.corpus);
  docs.pop_back();
  p::run_pipeline(c, docs);
  try {
    p::run_eval(c.run_dir, *c.gold, c.criterion);
    FAIL() << "expected MissingKg";
  } catch (const MissingKg &e) {
    EXPECT_EQ(e.docs(), std::vector<std::string>{"meshkatian"});
  }
}

// ---- command line -----------------------------------------------------------

TEST(Cli, ExitCodes) {
  testutil::TempDir dir;
  std::string cfg = (testutil::data_dir() / "config" / "demo.json").string();
  std::string common = " --set run.dir=" + (dir / "run").string() +
                       " --set embed.index=" + (dir / "i.kgei").string();
  EXPECT_EQ(run_cli("run --config " + cfg + common), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "run" / "eval_report.json"));
  EXPECT_EQ(run_cli("eval --run " + (dir / "run").string() + " --gold " +
                    (testutil::data_dir() / "corpus" / "demo_gold.jsonl").string()),
            0);
  EXPECT_EQ(run_cli("inspect " + (dir / "run" / "firouzi").string()), 0);
  EXPECT_EQ(run_cli("run --config " + cfg + common + " --set bogus.key=1"), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "nope.json").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);

  fs::write_atomic(dir / "ghost.jsonl",
                   read(testutil::data_dir() / "corpus" / "demo.jsonl") +
                       "{\"id\":\"ghost\",\"text\":\"Unknown.\"}\n");
  EXPECT_EQ(run_cli("run --config " + cfg + " --set run.dir=" + (dir / "run2").string() +
                    " --set embed.index=" + (dir / "i.kgei").string() +
                    " --set run.corpus=" + (dir / "ghost.jsonl").string()),
            1);
}

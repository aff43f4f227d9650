#include "kgforge/pipeline.h"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <mutex>
#include <thread>

#include "kgforge/artifacts.h"
#include "kgforge/corpus.h"
#include "kgforge/cq.h"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/hash.h"
#include "kgforge/kg.h"
#include "kgforge/matcher.h"
#include "kgforge/ontology.h"
#include "kgforge/rdf.h"
#include "kgforge/relations.h"

namespace kgforge::pipeline {

namespace stdfs = std::filesystem;
using artifacts::Json;

namespace {

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

llm::RequestSettings request_settings(const config::RunConfig &c) {
  return {c.llm.model, c.llm.temperature, c.llm.max_output_tokens};
}

// Reuses a stage artifact when `load` accepts it, otherwise computes and
// persists it.
template <typename T, typename Load, typename Compute>
T stage(DocStatus &st, const char *name, const stdfs::path &marker, Load load,
        Compute compute) {
  if (stdfs::exists(marker)) {
    try {
      T value = load();
      ++st.resumed_stages;
      return value;
    } catch (const Error &e) {
      std::cerr << "warning: " << st.id << ": recomputing " << name << ": "
                << e.what() << "\n";
    }
  }
  st.failed_stage = name;
  return compute();
}

struct FrontResult {
  std::vector<QAPair> qa;
  std::vector<std::string> concepts;
  matcher::FinalPropertySet final_set;
};

struct DocCounters {
  std::size_t relations = 0, dropped_cqs = 0, skipped = 0, dropped_off = 0,
              dropped_entries = 0, renamed = 0;
};

class Runner {
 public:
  Runner(const config::RunConfig &config, const std::vector<Document> &corpus,
         Services &services)
      : config_(config), corpus_(corpus), services_(services),
        settings_(request_settings(config)) {
    manifest_.config = config.to_json();
    manifest_.started_at = now_utc();
    for (const auto &d : corpus) manifest_.documents.emplace_back(d.id);
    ontologies_.resize(corpus.size());
  }

  RunManifest run() {
    stdfs::create_directories(config_.run_dir);
    write_manifest();
    std::vector<std::optional<FrontResult>> fronts(corpus_.size());
    const bool corpus_scope = config_.scope == config::OntologyScope::kCorpus;

    parallel([&](std::size_t i) {
      fronts[i] = guarded(i, [&](DocStatus &st) {
        FrontResult f = front(corpus_[i], st);
        if (!corpus_scope) {
          ontologies_[i] = document_ontology(corpus_[i], f, st);
          build_graph(corpus_[i], f, *ontologies_[i], st);
        }
        return f;
      });
    });

    if (corpus_scope) {
      std::optional<ontology::OntologyDocument> shared;
      try {
        shared = corpus_ontology(fronts);
      } catch (const Error &e) {
        for (std::size_t i = 0; i < corpus_.size(); ++i) {
          if (fronts[i]) fail(i, "ontology", e.what());
        }
      }
      if (shared) {
        parallel([&](std::size_t i) {
          if (!fronts[i]) return;
          guarded(i, [&](DocStatus &st) {
            build_graph(corpus_[i], *fronts[i], *shared, st);
            return 0;
          });
        });
      }
    } else {
      std::vector<ontology::OntologyDocument> done;
      for (auto &o : ontologies_) {
        if (o) done.push_back(*o);
      }
      fs::write_atomic(config_.run_dir / "ontology.ttl",
                       ontology::merge_ontologies(done).text);
    }

    std::lock_guard lock(mutex_);
    for (auto &d : manifest_.documents) {
      if (d.status == Status::kPending) d.status = Status::kDone;
      if (d.status == Status::kDone) d.failed_stage.clear();
    }
    auto g = services_.gateway->counters();
    Counters &c = manifest_.counters;
    c.llm_calls = g.backend_calls;
    c.cache_hits = g.cache_hits;
    c.cache_corrupt = g.cache_corrupt;
    c.truncated_responses = g.truncated;
    c.relations = totals_.relations;
    c.dropped_cqs = totals_.dropped_cqs;
    c.skipped_statements = totals_.skipped;
    c.dropped_off_ontology = totals_.dropped_off;
    c.dropped_ontology_entries = totals_.dropped_entries;
    c.renamed_properties = totals_.renamed;
    manifest_.finished_at = now_utc();
    write_manifest_locked();
    return manifest_;
  }

 private:
  template <typename Fn>
  void parallel(Fn fn) {
    std::atomic<std::size_t> next{0};
    std::size_t n = std::min<std::size_t>(std::max<std::size_t>(1, config_.workers),
                                          corpus_.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < corpus_.size(); i = next++) fn(i);
      });
    }
    for (auto &t : pool) t.join();
  }

  // Runs `fn` for document i; an exception marks the document failed.
  template <typename Fn>
  auto guarded(std::size_t i, Fn fn) -> std::optional<decltype(fn(std::declval<DocStatus &>()))> {
    DocStatus st(corpus_[i].id);
    try {
      {
        std::lock_guard lock(mutex_);
        st.resumed_stages = manifest_.documents[i].resumed_stages;
      }
      auto value = fn(st);
      std::lock_guard lock(mutex_);
      manifest_.documents[i].resumed_stages = st.resumed_stages;
      return value;
    } catch (const std::exception &e) {
      fail(i, st.failed_stage, e.what());
      return std::nullopt;
    }
  }

  void fail(std::size_t i, const std::string &stage_name, const std::string &what) {
    std::lock_guard lock(mutex_);
    auto &d = manifest_.documents[i];
    d.status = Status::kFailed;
    d.failed_stage = stage_name;
    d.error = what;
    std::cerr << "error: " << d.id << " failed at " << stage_name << ": " << what << "\n";
    write_manifest_locked();
  }

  void add(const DocCounters &c) {
    std::lock_guard lock(mutex_);
    totals_.relations += c.relations;
    totals_.dropped_cqs += c.dropped_cqs;
    totals_.skipped += c.skipped;
    totals_.dropped_off += c.dropped_off;
    totals_.dropped_entries += c.dropped_entries;
    totals_.renamed += c.renamed;
  }

  stdfs::path doc_dir(const Document &d) const { return config_.run_dir / d.id; }

  FrontResult front(const Document &doc, DocStatus &st) {
    const stdfs::path dir = doc_dir(doc);
    DocCounters counters;
    llm::Gateway &gw = *services_.gateway;

    auto cqs = stage<cq::CqResult>(
        st, "cqs", dir / "cqs.json",
        [&] { return artifacts::cqs_from_json(artifacts::read_json(dir / "cqs.json")); },
        [&] {
          auto r = cq::generate_cqs(gw, settings_, doc, config_.cq_cap);
          fs::write_atomic(dir / "cqs.json", dump(artifacts::cqs_to_json(doc.id, r)));
          return r;
        });
    counters.dropped_cqs = cqs.dropped;

    FrontResult f;
    f.qa = stage<std::vector<QAPair>>(
        st, "qa", dir / "qa.json",
        [&] { return artifacts::qa_from_json(artifacts::read_json(dir / "qa.json")); },
        [&] {
          std::vector<QAPair> qa;
          for (const auto &q : cqs.questions) {
            qa.push_back(cq::answer_cq(gw, settings_, doc, q));
          }
          fs::write_atomic(dir / "qa.json", dump(artifacts::qa_to_json(doc.id, qa)));
          return qa;
        });

    auto rels = stage<relations::RelationResult>(
        st, "relations", dir / "relations.json",
        [&] {
          return artifacts::relations_from_json(
              artifacts::read_json(dir / "relations.json"), doc.id);
        },
        [&] {
          auto r = relations::extract_relations(gw, settings_, doc, cqs.questions);
          fs::write_atomic(dir / "relations.json",
                           dump(artifacts::relations_to_json(doc.id, r)));
          return r;
        });
    counters.relations = rels.relations.size();
    f.concepts = rels.concepts;

    f.final_set = stage<matcher::FinalPropertySet>(
        st, "matches", dir / "matches.json",
        [&] {
          return artifacts::matches_from_json(artifacts::read_json(dir / "matches.json"),
                                              services_.catalog, services_.mode.kind);
        },
        [&] {
          matcher::MatcherContext ctx{services_.catalog, services_.index,
                                      *services_.embedder, gw, settings_,
                                      config_.embed.text, services_.aliases};
          std::vector<matcher::MatchDecision> decisions;
          for (const auto &r : rels.relations) {
            decisions.push_back(matcher::match_relation(r, ctx, services_.mode));
          }
          auto final_set = matcher::build_final_property_set(decisions, services_.mode);
          fs::write_atomic(dir / "matches.json",
                           dump(artifacts::matches_to_json(doc.id, services_.mode.kind,
                                                           decisions, final_set)));
          return final_set;
        });
    add(counters);
    return f;
  }

  ontology::OntologyDocument author(const matcher::FinalPropertySet &final_set,
                                    const std::vector<std::string> &concepts,
                                    const stdfs::path &dir, DocStatus &st) {
    return stage<ontology::OntologyDocument>(
        st, "ontology", dir / "ontology.ttl",
        [&] {
          auto j = artifacts::read_json(dir / "ontology.json");
          auto doc = artifacts::ontology_from_json(j);
          if (fs::read_file(dir / "ontology.ttl") != doc.text) {
            throw SchemaError(0, "ontology.ttl does not match ontology.json");
          }
          add({0, 0, 0, 0, j.value("dropped_entries", std::size_t{0}), doc.renamed});
          return doc;
        },
        [&] {
          auto authored = ontology::author_minted_entries(
              *services_.gateway, settings_, final_set.minted, concepts);
          auto doc = ontology::assemble_ontology(
              ontology::format_wikidata_entries(final_set.wikidata),
              std::move(authored.entries));
          fs::write_atomic(dir / "ontology.json",
                           dump(artifacts::ontology_to_json(doc, authored.dropped)));
          fs::write_atomic(dir / "ontology.ttl", doc.text);
          add({0, 0, 0, 0, authored.dropped, doc.renamed});
          return doc;
        });
  }

  ontology::OntologyDocument document_ontology(const Document &doc,
                                               const FrontResult &f,
                                               DocStatus &st) {
    return author(f.final_set, f.concepts, doc_dir(doc), st);
  }

  ontology::OntologyDocument corpus_ontology(
      const std::vector<std::optional<FrontResult>> &fronts) {
    matcher::FinalPropertySet merged;
    std::vector<std::string> concepts;
    std::set<std::string> pids, names, seen_concepts;
    for (const auto &f : fronts) {
      if (!f) continue;
      for (const auto &e : f->final_set.wikidata) {
        if (pids.insert(e.pid).second) merged.wikidata.push_back(e);
      }
      for (const auto &r : f->final_set.minted) {
        if (names.insert(relations::normalize_name(r.name)).second) {
          merged.minted.push_back(r);
        }
      }
      for (const auto &c : f->concepts) {
        if (seen_concepts.insert(c).second) concepts.push_back(c);
      }
    }
    DocStatus st("<corpus>");
    return author(merged, concepts, config_.run_dir, st);
  }

  void build_graph(const Document &doc, const FrontResult &f,
                   const ontology::OntologyDocument &ont, DocStatus &st) {
    const stdfs::path dir = doc_dir(doc);
    stage<int>(
        st, "kg", dir / "kg.ttl",
        [&] {
          auto meta = artifacts::read_json(dir / "kg_meta.json");
          rdf::parse_turtle(fs::read_file(dir / "kg.ttl"));
          add({0, 0, meta.value("skipped_statements", std::size_t{0}),
               meta.value("dropped_off_ontology", std::size_t{0}), 0, 0});
          return 0;
        },
        [&] {
          kg::KgOptions options{config_.kg_per_pair};
          auto r = kg::build_kg(*services_.gateway, settings_, doc, f.qa, ont, options);
          fs::write_atomic(dir / "kg_meta.json", dump(artifacts::kg_meta_to_json(doc.id, r)));
          fs::write_atomic(dir / "kg.ttl", rdf::serialize_turtle(r.graph));
          add({0, 0, r.skipped_statements, r.dropped_off_ontology, 0, 0});
          return 0;
        });
  }

  void write_manifest() {
    std::lock_guard lock(mutex_);
    write_manifest_locked();
  }

  void write_manifest_locked() {
    fs::write_atomic(config_.run_dir / "manifest.json", dump(manifest_.to_json()));
  }

  const config::RunConfig &config_;
  const std::vector<Document> &corpus_;
  Services &services_;
  llm::RequestSettings settings_;
  std::mutex mutex_;
  RunManifest manifest_;
  DocCounters totals_;
  std::vector<std::optional<ontology::OntologyDocument>> ontologies_;
};

std::string index_fingerprint(const config::RunConfig &config,
                              const embedding::Embedder &embedder) {
  std::string snapshot = fs::read_file(config.catalog_snapshot);
  return embedder.fingerprint() + "|" +
         (config.embed.text == matcher::EmbedText::kLabeled ? "labeled"
                                                            : "description_only") +
         "|" + sha256_hex(snapshot).substr(0, 16);
}

std::string api_key(const std::string &env) {
  const char *v = env.empty() ? nullptr : std::getenv(env.c_str());
  return v ? v : "";
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::kPending: return "pending";
    case Status::kDone: return "done";
    case Status::kFailed: return "failed";
  }
  return "pending";
}

std::size_t RunManifest::count(Status s) const {
  std::size_t n = 0;
  for (const auto &d : documents) n += d.status == s;
  return n;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(finished_at);
  j["documents"] = nlohmann::ordered_json::array();
  for (const auto &d : documents) {
    nlohmann::ordered_json e = {{"id", d.id},
                                {"status", to_string(d.status)},
                                {"resumed_stages", d.resumed_stages}};
    if (d.status == Status::kFailed) {
      e["failed_stage"] = d.failed_stage;
      e["error"] = d.error;
    }
    j["documents"].push_back(std::move(e));
  }
  j["counters"] = {{"llm_calls", counters.llm_calls},
                   {"cache_hits", counters.cache_hits},
                   {"cache_corrupt", counters.cache_corrupt},
                   {"truncated_responses", counters.truncated_responses},
                   {"relations", counters.relations},
                   {"dropped_cqs", counters.dropped_cqs},
                   {"skipped_statements", counters.skipped_statements},
                   {"dropped_off_ontology", counters.dropped_off_ontology},
                   {"dropped_ontology_entries", counters.dropped_ontology_entries},
                   {"renamed_properties", counters.renamed_properties}};
  j["summary"] = {{"done", count(Status::kDone)},
                  {"failed", count(Status::kFailed)},
                  {"pending", count(Status::kPending)}};
  return j;
}

std::unique_ptr<llm::Gateway> make_gateway(const config::RunConfig &config) {
  std::unique_ptr<llm::ChatBackend> backend;
  if (config.llm.backend == "mock") {
    backend = std::make_unique<llm::MockBackend>(config.llm.mock_dir);
  } else {
    llm::HttpBackendOptions o;
    o.endpoint = config.llm.endpoint;
    o.api_key = api_key(config.llm.api_key_env);
    o.retry.max_attempts = config.llm.retries;
    o.timeout = std::chrono::milliseconds(config.llm.timeout_ms);
    backend = std::make_unique<llm::HttpBackend>(std::move(o));
  }
  return std::make_unique<llm::Gateway>(
      std::move(backend), llm::GatewayOptions{config.llm.cache_dir, config.llm.max_in_flight});
}

std::unique_ptr<embedding::Embedder> make_embedder(const config::RunConfig &config) {
  if (config.embed.mode == "live") {
    embedding::HttpEmbedderOptions o;
    o.endpoint = config.embed.endpoint;
    o.model = config.embed.model;
    o.api_key = api_key(config.embed.api_key_env);
    o.retry.max_attempts = config.llm.retries;
    return std::make_unique<embedding::HttpEmbedder>(std::move(o));
  }
  return std::make_unique<embedding::FallbackEmbedder>();
}

embedding::EmbeddingIndex load_or_build_index(const catalog::Catalog &catalog,
                                              embedding::Embedder &embedder,
                                              const config::RunConfig &config) {
  const std::string fingerprint = index_fingerprint(config, embedder);
  const stdfs::path path = config.index_path();
  embedding::EmbeddingIndex index;
  if (embedding::EmbeddingIndex::load(path, fingerprint, index) &&
      index.records().size() == catalog.size()) {
    return index;
  }
  index = matcher::build_index(catalog, matcher::MatchMode::unconstrained(), embedder,
                               config.embed.text);
  try {
    index.save(path, fingerprint);
  } catch (const IoError &e) {
    std::cerr << "warning: index not persisted: " << e.what() << "\n";
  }
  return index;
}

Services make_services(const config::RunConfig &config) {
  Services s;
  s.catalog = catalog::filter_catalog(catalog::load_snapshot(config.catalog_snapshot));
  if (s.catalog.empty()) throw ConfigError("catalog is empty after filtering");
  s.embedder = make_embedder(config);
  s.index = load_or_build_index(s.catalog, *s.embedder, config);
  if (config.mode == matcher::MatchMode::Kind::kConstrained) {
    std::optional<std::set<std::string>> target;
    if (config.target) target = config::load_target(*config.target, s.catalog);
    s.mode = matcher::MatchMode::constrained(target);
    if (target) {
      std::vector<embedding::Record> subset;
      for (const auto &r : s.index.records()) {
        const auto *e = s.catalog.by_pid(r.id);
        if (e && target->count(e->pascal_label)) subset.push_back(r);
      }
      s.index = embedding::EmbeddingIndex::build(std::move(subset));
    }
  } else {
    s.mode = matcher::MatchMode::unconstrained();
  }
  if (config.aliases) s.aliases = config::load_aliases(*config.aliases, s.catalog);
  s.gateway = make_gateway(config);
  return s;
}

RunManifest run_pipeline(const config::RunConfig &config,
                         const std::vector<Document> &corpus, Services &services) {
  config.validate();
  return Runner(config, corpus, services).run();
}

RunManifest run_pipeline(const config::RunConfig &config,
                         const std::vector<Document> &corpus) {
  config.validate();
  Services services = make_services(config);
  return Runner(config, corpus, services).run();
}

eval::EvalReport run_eval(const stdfs::path &run_dir, const stdfs::path &gold_path,
                          eval::Criterion criterion, double jaccard) {
  auto gold = corpus::load_gold(gold_path);
  std::vector<std::string> missing;
  std::vector<std::pair<std::string, rdf::Graph>> results;
  for (const auto &[doc_id, triples] : gold) {
    auto text = fs::try_read_file(run_dir / doc_id / "kg.ttl");
    if (!text) {
      missing.push_back(doc_id);
      continue;
    }
    results.emplace_back(doc_id, rdf::parse_turtle(*text));
  }
  if (!missing.empty()) throw MissingKg(missing);
  auto report = eval::evaluate_corpus(results, gold, criterion, jaccard);
  fs::write_atomic(run_dir / "eval_report.json", report.to_json().dump(2) + "\n");
  return report;
}

}  // namespace kgforge::pipeline

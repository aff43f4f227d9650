#pragma once

// Stage sequencing over a corpus with per-document artifacts, resume and a
// run manifest.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgforge/catalog.h"
#include "kgforge/config.h"
#include "kgforge/embedding.h"
#include "kgforge/eval.h"
#include "kgforge/llm.h"
#include "kgforge/types.h"

namespace kgforge::pipeline {

enum class Status { kPending, kDone, kFailed };
std::string to_string(Status s);

struct DocStatus {
  explicit DocStatus(std::string doc_id = {}) : id(std::move(doc_id)) {}
  std::string id;
  Status status = Status::kPending;
  std::string failed_stage;
  std::string error;
  std::size_t resumed_stages = 0;  // artifacts reused from an earlier run
};

struct Counters {
  std::size_t llm_calls = 0;  // calls that reached the backend
  std::size_t cache_hits = 0;
  std::size_t cache_corrupt = 0;
  std::size_t truncated_responses = 0;
  std::size_t relations = 0;
  std::size_t dropped_cqs = 0;
  std::size_t skipped_statements = 0;
  std::size_t dropped_off_ontology = 0;
  std::size_t dropped_ontology_entries = 0;
  std::size_t renamed_properties = 0;
};

struct RunManifest {
  nlohmann::ordered_json config;
  std::vector<DocStatus> documents;
  Counters counters;
  std::string started_at;
  std::string finished_at;

  std::size_t count(Status s) const;
  nlohmann::ordered_json to_json() const;
};

// Backends and indexes shared by every document of a run.
struct Services {
  catalog::Catalog catalog;  // filtered
  std::unique_ptr<embedding::Embedder> embedder;
  embedding::EmbeddingIndex index;  // restricted to the target, if any
  std::unique_ptr<llm::Gateway> gateway;
  matcher::MatchMode mode;
  std::map<std::string, std::string> aliases;
};

std::unique_ptr<llm::Gateway> make_gateway(const config::RunConfig &config);
std::unique_ptr<embedding::Embedder> make_embedder(
    const config::RunConfig &config);

// Loads the persisted catalog index when its fingerprint matches, otherwise
// embeds the catalog and saves the sidecar.
embedding::EmbeddingIndex load_or_build_index(const catalog::Catalog &catalog,
                                              embedding::Embedder &embedder,
                                              const config::RunConfig &config);

// Throws ConfigError for an unresolvable target or alias file.
Services make_services(const config::RunConfig &config);

// Runs every stage for every document; failures are recorded per document.
RunManifest run_pipeline(const config::RunConfig &config,
                         const std::vector<Document> &corpus);
RunManifest run_pipeline(const config::RunConfig &config,
                         const std::vector<Document> &corpus,
                         Services &services);

// Scores `<run_dir>/<doc_id>/kg.ttl` for every gold document and writes
// `<run_dir>/eval_report.json`. Throws MissingKg listing absent documents.
eval::EvalReport run_eval(const std::filesystem::path &run_dir,
                          const std::filesystem::path &gold_path,
                          eval::Criterion criterion, double jaccard = 0.5);

}  // namespace kgforge::pipeline

#pragma once

// Run configuration: JSON file (nested objects or flat dotted keys),
// KGFORGE_<KEY> environment overrides, then command-line overrides.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgforge/catalog.h"
#include "kgforge/eval.h"
#include "kgforge/matcher.h"

namespace kgforge::config {

enum class OntologyScope { kDocument, kCorpus };

struct LlmConfig {
  std::string backend = "mock";  // mock | http
  std::filesystem::path mock_dir;
  std::string endpoint;
  std::string api_key_env = "KGFORGE_LLM_API_KEY";
  std::string model = "mock";
  double temperature = 0.0;
  int max_output_tokens = 2048;
  std::optional<std::filesystem::path> cache_dir;
  int max_in_flight = 4;
  int retries = 3;
  long timeout_ms = 120000;
};

struct EmbedConfig {
  std::string mode = "fallback";  // fallback | live
  std::string endpoint;
  std::string model;
  std::string api_key_env = "KGFORGE_EMBED_API_KEY";
  matcher::EmbedText text = matcher::EmbedText::kLabeled;
  std::optional<std::filesystem::path> index;  // default: <snapshot>.kgei
};

struct RunConfig {
  matcher::MatchMode::Kind mode = matcher::MatchMode::Kind::kConstrained;
  std::optional<std::filesystem::path> target;
  std::size_t cq_cap = 3;
  OntologyScope scope = OntologyScope::kDocument;
  bool kg_per_pair = false;
  LlmConfig llm;
  EmbedConfig embed;
  std::filesystem::path catalog_snapshot;
  std::string catalog_endpoint = "https://query.wikidata.org/sparql";
  std::filesystem::path run_dir;
  std::filesystem::path corpus;
  std::size_t workers = 4;
  eval::Criterion criterion = eval::Criterion::kPartial;
  double jaccard = 0.5;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> aliases;

  // Sets one dotted key. Relative paths resolve against `base`. Throws
  // ConfigError on an unknown key or a bad value.
  void set(const std::string &key, const nlohmann::json &value,
           const std::filesystem::path &base = {});

  // Snapshot for the manifest; secrets are never stored, only the names of
  // the variables holding them.
  nlohmann::ordered_json to_json() const;

  // Throws ConfigError when required settings are missing.
  void validate() const;

  std::filesystem::path index_path() const;
};

// Every recognized dotted key.
const std::vector<std::string> &known_keys();

// "llm.mock_dir" -> "KGFORGE_LLM_MOCK_DIR".
std::string env_name(const std::string &key);

// Reads the file, applies environment overrides and returns the config.
// Throws ConfigError.
RunConfig load_config(const std::filesystem::path &path);

// Applies KGFORGE_* overrides from the process environment.
void apply_env(RunConfig &config);

// Pascal labels named by a target file (one pid or pascal label per line,
// '#' comments). Throws ConfigError for entries absent from `catalog`.
std::set<std::string> load_target(const std::filesystem::path &path,
                                  const catalog::Catalog &catalog);

// JSON object {relation name: pascal label or pid}.
std::map<std::string, std::string> load_aliases(
    const std::filesystem::path &path, const catalog::Catalog &catalog);

}  // namespace kgforge::config

#include "kgforge/config.h"

#include <cstdlib>
#include <functional>

#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/relations.h"
#include "kgforge/text.h"

namespace kgforge::config {

using json = nlohmann::json;

namespace {

std::string as_string(const json &v, const std::string &key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ConfigError(key + ": expected a string");
}

std::filesystem::path as_path(const json &v, const std::string &key,
                              const std::filesystem::path &base) {
  std::filesystem::path p = as_string(v, key);
  if (p.empty()) throw ConfigError(key + ": empty path");
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

long as_int(const json &v, const std::string &key, long min) {
  long out = 0;
  if (v.is_number_integer()) {
    out = v.get<long>();
  } else if (v.is_string()) {
    try {
      std::size_t used = 0;
      out = std::stol(v.get<std::string>(), &used);
      if (used != v.get<std::string>().size()) throw std::invalid_argument("");
    } catch (const std::exception &) {
      throw ConfigError(key + ": expected an integer");
    }
  } else {
    throw ConfigError(key + ": expected an integer");
  }
  if (out < min) throw ConfigError(key + ": must be >= " + std::to_string(min));
  return out;
}

double as_double(const json &v, const std::string &key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return std::stod(v.get<std::string>());
    } catch (const std::exception &) {
    }
  }
  throw ConfigError(key + ": expected a number");
}

bool as_bool(const json &v, const std::string &key) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    std::string s = text::to_lower(v.get<std::string>());
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
  }
  throw ConfigError(key + ": expected a boolean");
}

using Setter = std::function<void(RunConfig &, const json &, const std::string &,
                                  const std::filesystem::path &)>;

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"mode",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         std::string s = text::to_lower(as_string(v, k));
         if (s == "constrained") {
           c.mode = matcher::MatchMode::Kind::kConstrained;
         } else if (s == "unconstrained") {
           c.mode = matcher::MatchMode::Kind::kUnconstrained;
         } else {
           throw ConfigError(k + ": expected constrained|unconstrained");
         }
       }},
      {"target", [](RunConfig &c, const json &v, const std::string &k,
                    auto &b) { c.target = as_path(v, k, b); }},
      {"cq.max_per_doc", [](RunConfig &c, const json &v, const std::string &k,
                            auto &) { c.cq_cap = as_int(v, k, 1); }},
      {"ontology.scope",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         std::string s = text::to_lower(as_string(v, k));
         if (s == "document") {
           c.scope = OntologyScope::kDocument;
         } else if (s == "corpus") {
           c.scope = OntologyScope::kCorpus;
         } else {
           throw ConfigError(k + ": expected document|corpus");
         }
       }},
      {"kg.per_pair", [](RunConfig &c, const json &v, const std::string &k,
                         auto &) { c.kg_per_pair = as_bool(v, k); }},
      {"llm.backend",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.llm.backend = text::to_lower(as_string(v, k));
         if (c.llm.backend != "mock" && c.llm.backend != "http") {
           throw ConfigError(k + ": expected mock|http");
         }
       }},
      {"llm.mock_dir", [](RunConfig &c, const json &v, const std::string &k,
                          auto &b) { c.llm.mock_dir = as_path(v, k, b); }},
      {"llm.endpoint", [](RunConfig &c, const json &v, const std::string &k,
                          auto &) { c.llm.endpoint = as_string(v, k); }},
      {"llm.api_key_env", [](RunConfig &c, const json &v, const std::string &k,
                             auto &) { c.llm.api_key_env = as_string(v, k); }},
      {"llm.model", [](RunConfig &c, const json &v, const std::string &k,
                       auto &) { c.llm.model = as_string(v, k); }},
      {"llm.temperature",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.llm.temperature = as_double(v, k);
         if (c.llm.temperature < 0) throw ConfigError(k + ": must be >= 0");
       }},
      {"llm.max_output_tokens",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.llm.max_output_tokens = static_cast<int>(as_int(v, k, 1));
       }},
      {"llm.cache_dir", [](RunConfig &c, const json &v, const std::string &k,
                           auto &b) { c.llm.cache_dir = as_path(v, k, b); }},
      {"llm.max_in_flight",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.llm.max_in_flight = static_cast<int>(as_int(v, k, 1));
         if (c.llm.max_in_flight > 1024) throw ConfigError(k + ": at most 1024");
       }},
      {"llm.retries", [](RunConfig &c, const json &v, const std::string &k,
                         auto &) { c.llm.retries = static_cast<int>(as_int(v, k, 1)); }},
      {"llm.timeout_ms", [](RunConfig &c, const json &v, const std::string &k,
                            auto &) { c.llm.timeout_ms = as_int(v, k, 1); }},
      {"embed.mode",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.embed.mode = text::to_lower(as_string(v, k));
         if (c.embed.mode != "fallback" && c.embed.mode != "live") {
           throw ConfigError(k + ": expected live|fallback");
         }
       }},
      {"embed.endpoint", [](RunConfig &c, const json &v, const std::string &k,
                            auto &) { c.embed.endpoint = as_string(v, k); }},
      {"embed.model", [](RunConfig &c, const json &v, const std::string &k,
                         auto &) { c.embed.model = as_string(v, k); }},
      {"embed.api_key_env",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.embed.api_key_env = as_string(v, k);
       }},
      {"embed.text",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         std::string s = text::to_lower(as_string(v, k));
         if (s == "labeled") {
           c.embed.text = matcher::EmbedText::kLabeled;
         } else if (s == "description_only") {
           c.embed.text = matcher::EmbedText::kDescriptionOnly;
         } else {
           throw ConfigError(k + ": expected labeled|description_only");
         }
       }},
      {"embed.index", [](RunConfig &c, const json &v, const std::string &k,
                         auto &b) { c.embed.index = as_path(v, k, b); }},
      {"catalog.snapshot",
       [](RunConfig &c, const json &v, const std::string &k, auto &b) {
         c.catalog_snapshot = as_path(v, k, b);
       }},
      {"catalog.endpoint",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.catalog_endpoint = as_string(v, k);
       }},
      {"run.dir", [](RunConfig &c, const json &v, const std::string &k,
                     auto &b) { c.run_dir = as_path(v, k, b); }},
      {"run.corpus", [](RunConfig &c, const json &v, const std::string &k,
                        auto &b) { c.corpus = as_path(v, k, b); }},
      {"run.workers", [](RunConfig &c, const json &v, const std::string &k,
                         auto &) { c.workers = as_int(v, k, 1); }},
      {"eval.criterion",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         try {
           c.criterion = eval::criterion_from_string(as_string(v, k));
         } catch (const std::invalid_argument &) {
           throw ConfigError(k + ": expected exact|partial");
         }
       }},
      {"eval.jaccard",
       [](RunConfig &c, const json &v, const std::string &k, auto &) {
         c.jaccard = as_double(v, k);
         if (c.jaccard <= 0 || c.jaccard > 1) throw ConfigError(k + ": must be in (0, 1]");
       }},
      {"eval.gold", [](RunConfig &c, const json &v, const std::string &k,
                       auto &b) { c.gold = as_path(v, k, b); }},
      {"match.aliases", [](RunConfig &c, const json &v, const std::string &k,
                           auto &b) { c.aliases = as_path(v, k, b); }},
  };
  return table;
}

void flatten(const json &j, const std::string &prefix,
             std::map<std::string, json> &out) {
  for (const auto &[k, v] : j.items()) {
    std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else {
      out[key] = v;
    }
  }
}

std::vector<std::string> read_lines(const std::filesystem::path &path) {
  auto data = fs::try_read_file(path);
  if (!data) throw ConfigError("cannot read " + path.string());
  std::vector<std::string> out;
  for (const auto &line : text::split_lines(*data)) {
    std::string t = text::trim(line.substr(0, line.find('#')));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

const catalog::PropertyEntry *resolve(const catalog::Catalog &catalog,
                                      const std::string &name) {
  if (const auto *e = catalog.by_pid(name)) return e;
  if (const auto *e = catalog.by_pascal(name)) return e;
  try {
    return catalog.by_pascal(catalog::pascal_case(name));
  } catch (const EmptyResult &) {
    return nullptr;
  }
}

}  // namespace

void RunConfig::set(const std::string &key, const json &value,
                    const std::filesystem::path &base) {
  auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key: " + key);
  it->second(*this, value, key, base);
}

nlohmann::ordered_json RunConfig::to_json() const {
  auto opt = [](const auto &p) -> nlohmann::ordered_json {
    if (!p) return nullptr;
    return p->string();
  };
  nlohmann::ordered_json j;
  j["mode"] = matcher::to_string(mode);
  j["target"] = opt(target);
  j["cq.max_per_doc"] = cq_cap;
  j["ontology.scope"] = scope == OntologyScope::kDocument ? "document" : "corpus";
  j["kg.per_pair"] = kg_per_pair;
  j["llm.backend"] = llm.backend;
  j["llm.mock_dir"] = llm.mock_dir.string();
  j["llm.endpoint"] = llm.endpoint;
  j["llm.api_key_env"] = llm.api_key_env;
  j["llm.model"] = llm.model;
  j["llm.temperature"] = llm.temperature;
  j["llm.max_output_tokens"] = llm.max_output_tokens;
  j["llm.cache_dir"] = opt(llm.cache_dir);
  j["llm.max_in_flight"] = llm.max_in_flight;
  j["llm.retries"] = llm.retries;
  j["llm.timeout_ms"] = llm.timeout_ms;
  j["embed.mode"] = embed.mode;
  j["embed.endpoint"] = embed.endpoint;
  j["embed.model"] = embed.model;
  j["embed.api_key_env"] = embed.api_key_env;
  j["embed.text"] = embed.text == matcher::EmbedText::kLabeled ? "labeled"
                                                               : "description_only";
  j["embed.index"] = index_path().string();
  j["catalog.snapshot"] = catalog_snapshot.string();
  j["catalog.endpoint"] = catalog_endpoint;
  j["run.dir"] = run_dir.string();
  j["run.corpus"] = corpus.string();
  j["run.workers"] = workers;
  j["eval.criterion"] = eval::to_string(criterion);
  j["eval.jaccard"] = jaccard;
  j["eval.gold"] = opt(gold);
  j["match.aliases"] = opt(aliases);
  return j;
}

void RunConfig::validate() const {
  if (run_dir.empty()) throw ConfigError("run.dir is required");
  if (corpus.empty()) throw ConfigError("run.corpus is required");
  if (catalog_snapshot.empty()) throw ConfigError("catalog.snapshot is required");
  if (!std::filesystem::exists(catalog_snapshot)) {
    throw ConfigError("catalog.snapshot not found: " + catalog_snapshot.string());
  }
  if (llm.backend == "mock" && llm.mock_dir.empty()) {
    throw ConfigError("llm.mock_dir is required for the mock backend");
  }
  if (llm.backend == "http" && llm.endpoint.empty()) {
    throw ConfigError("llm.endpoint is required for the http backend");
  }
  if (embed.mode == "live" && (embed.endpoint.empty() || embed.model.empty())) {
    throw ConfigError("embed.endpoint and embed.model are required in live mode");
  }
  if (target && mode != matcher::MatchMode::Kind::kConstrained) {
    throw ConfigError("a target list requires constrained mode");
  }
}

std::filesystem::path RunConfig::index_path() const {
  if (embed.index) return *embed.index;
  std::filesystem::path p = catalog_snapshot;
  p += ".kgei";
  return p;
}

const std::vector<std::string> &known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto &[k, v] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

std::string env_name(const std::string &key) {
  std::string out = "KGFORGE_";
  for (char c : key) {
    out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

void apply_env(RunConfig &config) {
  std::filesystem::path cwd = std::filesystem::current_path();
  for (const auto &key : known_keys()) {
    if (const char *v = std::getenv(env_name(key).c_str())) {
      config.set(key, std::string(v), cwd);
    }
  }
}

RunConfig load_config(const std::filesystem::path &path) {
  auto data = fs::try_read_file(path);
  if (!data) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(*data);
  } catch (const json::exception &e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::map<std::string, json> flat;
  flatten(j, "", flat);
  RunConfig config;
  std::filesystem::path base = std::filesystem::absolute(path).parent_path();
  for (const auto &[k, v] : flat) config.set(k, v, base);
  apply_env(config);
  return config;
}

std::set<std::string> load_target(const std::filesystem::path &path,
                                  const catalog::Catalog &catalog) {
  std::set<std::string> out;
  for (const auto &name : read_lines(path)) {
    const auto *e = resolve(catalog, name);
    if (!e) throw ConfigError("target entry not in catalog: " + name);
    out.insert(e->pascal_label);
  }
  return out;
}

std::map<std::string, std::string> load_aliases(
    const std::filesystem::path &path, const catalog::Catalog &catalog) {
  auto data = fs::try_read_file(path);
  if (!data) throw ConfigError("cannot read " + path.string());
  json j;
  try {
    j = json::parse(*data);
  } catch (const json::exception &e) {
    throw ConfigError("aliases " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("aliases must be a JSON object");
  std::map<std::string, std::string> out;
  for (const auto &[name, v] : j.items()) {
    if (!v.is_string()) throw ConfigError("alias for '" + name + "' must be a string");
    const auto *e = resolve(catalog, v.get<std::string>());
    if (!e) throw ConfigError("alias target not in catalog: " + v.get<std::string>());
    out[relations::normalize_name(name)] = e->pascal_label;
  }
  return out;
}

}  // namespace kgforge::config

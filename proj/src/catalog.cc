#include "kgforge/catalog.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>

#include "json.hpp"
#include "kgforge/error.h"
#include "kgforge/fs.h"

namespace kgforge::catalog {

using json = nlohmann::json;

namespace {

std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::vector<std::string> string_list(const json &j, const char *field,
                                     std::size_t record) {
  std::vector<std::string> out;
  if (!j.contains(field) || j[field].is_null()) return out;
  const json &v = j[field];
  if (v.is_string()) {
    // Tolerate "a|b" joined lists as produced by GROUP_CONCAT.
    std::string s = v.get<std::string>();
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t end = s.find('|', start);
      if (end == std::string::npos) end = s.size();
      if (end > start) out.push_back(s.substr(start, end - start));
      start = end + 1;
    }
    return out;
  }
  if (!v.is_array()) throw SchemaError(record, std::string(field));
  for (const auto &item : v) {
    if (!item.is_string()) throw SchemaError(record, std::string(field));
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_string(const json &j, const char *field,
                            std::size_t record) {
  if (!j.contains(field) || !j[field].is_string() ||
      j[field].get<std::string>().empty()) {
    throw SchemaError(record, std::string("missing field '") + field + "'");
  }
  return j[field].get<std::string>();
}

}  // namespace

Datatype Datatype::parse(std::string_view tag) {
  std::string key = fold(tag);
  // Strip an IRI down to its local name first.
  auto cut = tag.find_last_of("/#");
  if (cut != std::string_view::npos) key = fold(tag.substr(cut + 1));
  if (key == "item" || key == "wikibaseitem") return {DatatypeKind::kItem, ""};
  if (key == "quantity") return {DatatypeKind::kQuantity, ""};
  if (key == "string") return {DatatypeKind::kString, ""};
  if (key == "monolingualtext") return {DatatypeKind::kMonolingualText, ""};
  if (key == "time" || key == "pointintime") {
    return {DatatypeKind::kPointInTime, ""};
  }
  if (key == "externalid") return {DatatypeKind::kExternalId, ""};
  return {DatatypeKind::kOther, std::string(tag)};
}

std::string Datatype::name() const {
  switch (kind) {
    case DatatypeKind::kItem: return "Item";
    case DatatypeKind::kQuantity: return "Quantity";
    case DatatypeKind::kString: return "String";
    case DatatypeKind::kMonolingualText: return "MonolingualText";
    case DatatypeKind::kPointInTime: return "PointInTime";
    case DatatypeKind::kExternalId: return "ExternalId";
    case DatatypeKind::kOther: return raw;
  }
  return raw;
}

bool Datatype::whitelisted() const {
  switch (kind) {
    case DatatypeKind::kItem:
    case DatatypeKind::kQuantity:
    case DatatypeKind::kString:
    case DatatypeKind::kMonolingualText:
    case DatatypeKind::kPointInTime:
      return true;
    default:
      return false;
  }
}

std::optional<long> pid_number(std::string_view pid) {
  if (pid.size() < 2 || (pid[0] != 'P' && pid[0] != 'p')) return std::nullopt;
  long n = 0;
  for (char c : pid.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    n = n * 10 + (c - '0');
  }
  return n;
}

std::string pascal_case(std::string_view label) {
  std::string out;
  bool start_of_token = true;
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '-' ||
        c == '/') {
      start_of_token = true;
      continue;
    }
    if (!std::isalnum(static_cast<unsigned char>(c)) ||
        static_cast<unsigned char>(c) >= 0x80) {
      continue;
    }
    if (start_of_token) {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      start_of_token = false;
    } else {
      out += c;
    }
  }
  if (out.empty()) {
    throw EmptyResult("label '" + std::string(label) +
                      "' has no alphanumeric characters");
  }
  return out;
}

Catalog Catalog::from_entries(std::vector<PropertyEntry> entries,
                              bool filtered) {
  Catalog c;
  c.filtered_ = filtered;
  std::set<std::string> seen;
  for (const auto &e : entries) {
    if (!seen.insert(e.pid).second) throw DuplicatePid(e.pid);
  }
  // Smaller numeric pid wins a pascal label collision.
  std::map<std::string, std::size_t> winner;
  auto smaller = [](const PropertyEntry &a, const PropertyEntry &b) {
    auto na = pid_number(a.pid), nb = pid_number(b.pid);
    if (na && nb && *na != *nb) return *na < *nb;
    if (na.has_value() != nb.has_value()) return na.has_value();
    return a.pid < b.pid;
  };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [it, inserted] = winner.emplace(entries[i].pascal_label, i);
    if (!inserted && smaller(entries[i], entries[it->second])) it->second = i;
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (winner[entries[i].pascal_label] != i) {
      c.collisions_.push_back(entries[i].pid);
      std::cerr << "warning: property " << entries[i].pid << " dropped, label '"
                << entries[i].pascal_label << "' already used by "
                << entries[winner[entries[i].pascal_label]].pid << "\n";
      continue;
    }
    c.entries_.push_back(std::move(entries[i]));
  }
  for (std::size_t i = 0; i < c.entries_.size(); ++i) {
    c.by_pid_[c.entries_[i].pid] = i;
    c.by_pascal_[c.entries_[i].pascal_label] = i;
  }
  return c;
}

const PropertyEntry *Catalog::by_pid(std::string_view pid) const {
  auto it = by_pid_.find(pid);
  return it == by_pid_.end() ? nullptr : &entries_[it->second];
}

const PropertyEntry *Catalog::by_pascal(std::string_view pascal_label) const {
  auto it = by_pascal_.find(pascal_label);
  return it == by_pascal_.end() ? nullptr : &entries_[it->second];
}

PropertyEntry parse_record(std::string_view json_line, std::size_t record) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw SchemaError(record, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError(record, "record is not an object");
  PropertyEntry e;
  e.pid = required_string(j, "pid", record);
  e.label = required_string(j, "label", record);
  e.description = required_string(j, "description", record);
  e.datatype = Datatype::parse(required_string(j, "datatype", record));
  e.domains = string_list(j, "domains", record);
  e.ranges = string_list(j, "ranges", record);
  e.aliases = string_list(j, "aliases", record);
  try {
    e.pascal_label = pascal_case(e.label);
  } catch (const EmptyResult &) {
    throw SchemaError(record, "label has no alphanumeric characters");
  }
  return e;
}

std::string format_record(const PropertyEntry &e) {
  json j = {{"pid", e.pid},
            {"label", e.label},
            {"description", e.description},
            {"datatype", e.datatype.name()},
            {"domains", e.domains},
            {"ranges", e.ranges},
            {"aliases", e.aliases}};
  return j.dump();
}

Catalog load_snapshot(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  std::vector<PropertyEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    entries.push_back(parse_record(line, line_no));
  }
  if (in.bad()) throw IoError("error reading " + path.string());
  return Catalog::from_entries(std::move(entries), false);
}

void write_snapshot(const std::filesystem::path &path,
                    const std::vector<PropertyEntry> &entries) {
  std::string body;
  for (const auto &e : entries) body += format_record(e) + "\n";
  fs::write_atomic(path, body);
}

Catalog filter_catalog(const Catalog &catalog) {
  std::vector<PropertyEntry> kept;
  for (const auto &e : catalog.entries()) {
    if (e.datatype.whitelisted()) kept.push_back(e);
  }
  return Catalog::from_entries(std::move(kept), true);
}

const std::string &property_query() {
  static const std::string kQuery = R"(PREFIX wikibase: <http://wikiba.se/ontology#>
PREFIX wd: <http://www.wikidata.org/entity/>
PREFIX p: <http://www.wikidata.org/prop/>
PREFIX ps: <http://www.wikidata.org/prop/statement/>
PREFIX pq: <http://www.wikidata.org/prop/qualifier/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX schema: <http://schema.org/>
PREFIX skos: <http://www.w3.org/2004/02/skos/core#>
SELECT ?property ?propertyLabel ?propertyDescription ?datatype
  (GROUP_CONCAT(DISTINCT ?domainLabel; separator="|") AS ?domains)
  (GROUP_CONCAT(DISTINCT ?rangeLabel; separator="|") AS ?ranges)
  (GROUP_CONCAT(DISTINCT ?alias; separator="|") AS ?aliases)
WHERE {
  ?property a wikibase:Property ;
            wikibase:propertyType ?datatype ;
            rdfs:label ?propertyLabel .
  FILTER(LANG(?propertyLabel) = "en")
  OPTIONAL { ?property schema:description ?propertyDescription .
             FILTER(LANG(?propertyDescription) = "en") }
  OPTIONAL { ?property p:P2302 ?sc . ?sc ps:P2302 wd:Q21503250 ; pq:P2308 ?domain .
             ?domain rdfs:label ?domainLabel . FILTER(LANG(?domainLabel) = "en") }
  OPTIONAL { ?property p:P2302 ?vc . ?vc ps:P2302 wd:Q21510865 ; pq:P2308 ?range .
             ?range rdfs:label ?rangeLabel . FILTER(LANG(?rangeLabel) = "en") }
  OPTIONAL { ?property skos:altLabel ?alias . FILTER(LANG(?alias) = "en") }
}
GROUP BY ?property ?propertyLabel ?propertyDescription ?datatype
)";
  return kQuery;
}

std::vector<PropertyEntry> parse_sparql_results(std::string_view text,
                                                FetchStats &stats) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw QueryError(200, std::string("unparseable result: ") + e.what());
  }
  if (!doc.contains("results") || !doc["results"].contains("bindings")) {
    throw QueryError(200, "result document has no bindings");
  }
  auto value = [](const json &b, const char *k) -> std::string {
    if (!b.contains(k) || !b[k].contains("value")) return "";
    return b[k]["value"].get<std::string>();
  };
  auto split = [](const std::string &s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < s.size()) {
      std::size_t end = s.find('|', start);
      if (end == std::string::npos) end = s.size();
      if (end > start) out.push_back(s.substr(start, end - start));
      start = end + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<PropertyEntry> out;
  std::set<std::string> pids;
  for (const auto &b : doc["results"]["bindings"]) {
    std::string iri = value(b, "property");
    auto cut = iri.find_last_of('/');
    PropertyEntry e;
    e.pid = cut == std::string::npos ? iri : iri.substr(cut + 1);
    e.label = value(b, "propertyLabel");
    e.description = value(b, "propertyDescription");
    std::string dt = value(b, "datatype");
    if (e.pid.empty() || e.label.empty() || e.description.empty() ||
        dt.empty() || !pids.insert(e.pid).second) {
      ++stats.skipped;
      continue;
    }
    try {
      e.pascal_label = pascal_case(e.label);
    } catch (const EmptyResult &) {
      ++stats.skipped;
      continue;
    }
    e.datatype = Datatype::parse(dt);
    e.domains = split(value(b, "domains"));
    e.ranges = split(value(b, "ranges"));
    e.aliases = split(value(b, "aliases"));
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    auto na = pid_number(a.pid), nb = pid_number(b.pid);
    if (na && nb) return *na < *nb;
    return a.pid < b.pid;
  });
  stats.records = out.size();
  return out;
}

FetchStats fetch_catalog(const std::string &endpoint,
                         const std::filesystem::path &out,
                         const FetchOptions &options) {
  std::string body = "query=";
  for (unsigned char c : property_query()) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      body += static_cast<char>(c);
    } else {
      static constexpr char kHex[] = "0123456789ABCDEF";
      body += '%';
      body += kHex[c >> 4];
      body += kHex[c & 0xF];
    }
  }
  http::Headers headers = {{"Accept", "application/sparql-results+json"},
                           {"User-Agent", options.user_agent}};
  int attempts = 0;
  http::Response r = http::with_retries(
      options.retry,
      [&] {
        return http::post(endpoint, body, "application/x-www-form-urlencoded",
                          headers, {options.timeout});
      },
      &attempts);
  if (http::is_transient(r)) {
    throw NetworkError("catalog fetch failed after " +
                       std::to_string(attempts) + " attempts: " +
                       (r.status ? "HTTP " + std::to_string(r.status)
                                 : r.error));
  }
  if (r.status != 200) throw QueryError(r.status, r.body.substr(0, 200));

  FetchStats stats;
  auto entries = parse_sparql_results(r.body, stats);
  if (stats.skipped > 0) {
    std::cerr << "warning: skipped " << stats.skipped
              << " bindings without label, description or datatype\n";
  }
  write_snapshot(out, entries);
  return stats;
}

}  // namespace kgforge::catalog

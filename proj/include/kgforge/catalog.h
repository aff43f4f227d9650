#pragma once

// Wikidata property catalog: snapshot loading, datatype filtering and the
// SPARQL fetcher that produces snapshots.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/http.h"

namespace kgforge::catalog {

enum class DatatypeKind {
  kItem,
  kQuantity,
  kString,
  kMonolingualText,
  kPointInTime,
  kExternalId,
  kOther,
};

struct Datatype {
  DatatypeKind kind = DatatypeKind::kOther;
  std::string raw;  // original tag for kOther

  // Accepts Wikidata spellings ("WikibaseItem", "wikibase-item", "Time",
  // "Monolingualtext", "ExternalId", ...) and the canonical names below.
  static Datatype parse(std::string_view tag);
  // "Item", "Quantity", "String", "MonolingualText", "PointInTime",
  // "ExternalId", or the raw tag.
  std::string name() const;
  bool whitelisted() const;

  bool operator==(const Datatype &) const = default;
};

struct PropertyEntry {
  std::string pid;
  std::string label;
  std::string pascal_label;
  std::string description;
  Datatype datatype;
  std::vector<std::string> domains;
  std::vector<std::string> ranges;
  std::vector<std::string> aliases;

  bool operator==(const PropertyEntry &) const = default;
};

// Numeric part of a property id ("P19" -> 19); nullopt when malformed.
std::optional<long> pid_number(std::string_view pid);

// "place of birth" -> "PlaceOfBirth". Splits on whitespace, '-' and '/',
// upper-cases the first letter of each token and drops everything outside
// [A-Za-z0-9]. Throws EmptyResult if nothing survives.
std::string pascal_case(std::string_view label);

class Catalog {
 public:
  Catalog() = default;

  // Builds the indexes. Throws DuplicatePid. Entries whose pascal labels
  // collide keep the numerically smaller pid; dropped pids are reported via
  // collisions().
  static Catalog from_entries(std::vector<PropertyEntry> entries,
                              bool filtered = false);

  const std::vector<PropertyEntry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool filtered() const { return filtered_; }
  const std::vector<std::string> &collisions() const { return collisions_; }

  const PropertyEntry *by_pid(std::string_view pid) const;
  const PropertyEntry *by_pascal(std::string_view pascal_label) const;

 private:
  std::vector<PropertyEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> by_pid_;
  std::map<std::string, std::size_t, std::less<>> by_pascal_;
  std::vector<std::string> collisions_;
  bool filtered_ = false;
};

// Reads a line-delimited snapshot. Blank lines are ignored; SchemaError
// carries the 1-based line number.
// Throws IoError, SchemaError(record, field), DuplicatePid.
Catalog load_snapshot(const std::filesystem::path &path);

// Parses one snapshot record (the JSON object text of one line).
PropertyEntry parse_record(std::string_view json_line, std::size_t record);
std::string format_record(const PropertyEntry &entry);

void write_snapshot(const std::filesystem::path &path,
                    const std::vector<PropertyEntry> &entries);

// Keeps Item, Quantity, String, MonolingualText and PointInTime properties.
Catalog filter_catalog(const Catalog &catalog);

struct FetchOptions {
  http::RetryPolicy retry;
  std::chrono::milliseconds timeout{120000};
  std::string user_agent = "kgforge/0.1 (property catalog snapshot)";
};

struct FetchStats {
  std::size_t records = 0;
  std::size_t skipped = 0;  // bindings without label/description/datatype
};

// The SPARQL query sent by fetch_catalog.
const std::string &property_query();

// Converts a SPARQL JSON result document into snapshot entries. Bindings
// missing a description (or label/datatype) are skipped and counted.
std::vector<PropertyEntry> parse_sparql_results(std::string_view json,
                                                FetchStats &stats);

// Queries `endpoint` and writes the snapshot to `out`.
// Throws NetworkError once the retry budget is spent, QueryError on a
// non-retryable HTTP status.
FetchStats fetch_catalog(const std::string &endpoint,
                         const std::filesystem::path &out,
                         const FetchOptions &options = {});

}  // namespace kgforge::catalog

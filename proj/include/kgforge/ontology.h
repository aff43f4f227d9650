#pragma once

// Stage 3: the grounding ontology. Wikidata-backed properties are copied
// verbatim; minted ones are authored by the LLM.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/catalog.h"
#include "kgforge/llm.h"
#include "kgforge/rdf.h"
#include "kgforge/types.h"

namespace kgforge::ontology {

struct OntologyEntry {
  std::string pascal_label;
  std::string description;
  std::string label;
  std::vector<std::string> domains;  // class labels, spaces allowed
  std::vector<std::string> ranges;
  std::optional<std::string> wikidata_pid;  // nullopt for minted entries

  bool minted() const { return !wikidata_pid.has_value(); }
  bool operator==(const OntologyEntry &) const = default;
};

struct OntologyDocument {
  std::vector<OntologyEntry> entries;  // sorted by pascal_label
  std::string text;                    // Turtle
  rdf::Graph graph;                    // parse of `text`
  std::size_t renamed = 0;             // minted labels renamed on collision

  bool empty() const { return entries.empty(); }
};

std::vector<OntologyEntry> format_wikidata_entries(
    const std::vector<catalog::PropertyEntry> &props);

struct AuthoredEntries {
  std::vector<OntologyEntry> entries;
  std::size_t dropped = 0;  // malformed statements in the reply
  std::string raw_response;
};

// "(name, name: usage comment)" lines, plus a "Concepts:" line when
// concepts are given.
std::string format_relation_lines(const std::vector<ExtractedRelation> &minted,
                                  const std::vector<std::string> &concepts);

// Joins space-separated words of prefixed class names in rdfs:domain and
// rdfs:range object lists ("wd:party conference" -> "wd:party_conference").
std::string repair_class_names(std::string_view turtle);

// Reads wikibase:Property subjects out of an authored reply. Throws
// ParseFailure when none is found.
AuthoredEntries parse_authored_entries(
    std::string_view response, const std::vector<ExtractedRelation> &minted);

// One C.5 call for all minted relations; no call when `minted` is empty.
AuthoredEntries author_minted_entries(
    llm::Gateway &gateway, const llm::RequestSettings &settings,
    const std::vector<ExtractedRelation> &minted,
    const std::vector<std::string> &concepts);

// `wd:` local name for a class label: characters that cannot appear in a
// local name become '_', runs collapse, edges are trimmed.
std::string class_local_name(std::string_view label);
// Inverse used when reading ontologies: '_' -> ' '.
std::string class_label_from_local(std::string_view local);

// Emits the prefix preamble and one property block per entry. A minted entry
// whose pascal label is already taken is renamed with a numeric suffix
// starting at 2.
OntologyDocument assemble_ontology(std::vector<OntologyEntry> wikidata_entries,
                                   std::vector<OntologyEntry> minted_entries);

// Union by pascal label (first occurrence wins), then assembled again.
OntologyDocument merge_ontologies(const std::vector<OntologyDocument> &docs);

}  // namespace kgforge::ontology

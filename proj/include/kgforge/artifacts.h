#pragma once

// JSON forms of the per-document stage artifacts. Readers throw
// SchemaError on malformed input so that the stage can be recomputed.

#include <string>
#include <vector>

#include "json.hpp"
#include "kgforge/catalog.h"
#include "kgforge/cq.h"
#include "kgforge/kg.h"
#include "kgforge/matcher.h"
#include "kgforge/ontology.h"
#include "kgforge/relations.h"

namespace kgforge::artifacts {

using Json = nlohmann::ordered_json;

Json cqs_to_json(const std::string &doc_id, const cq::CqResult &r);
cq::CqResult cqs_from_json(const nlohmann::json &j);

Json qa_to_json(const std::string &doc_id, const std::vector<QAPair> &qa);
std::vector<QAPair> qa_from_json(const nlohmann::json &j);

Json relations_to_json(const std::string &doc_id,
                       const relations::RelationResult &r);
relations::RelationResult relations_from_json(const nlohmann::json &j,
                                              const std::string &doc_id);

Json matches_to_json(const std::string &doc_id, matcher::MatchMode::Kind mode,
                     const std::vector<matcher::MatchDecision> &decisions,
                     const matcher::FinalPropertySet &final_set);
// Wikidata pids are looked up in `catalog`; an unknown pid or a mode other
// than `mode` is reported as a SchemaError.
matcher::FinalPropertySet matches_from_json(const nlohmann::json &j,
                                            const catalog::Catalog &catalog,
                                            matcher::MatchMode::Kind mode);

Json ontology_to_json(const ontology::OntologyDocument &doc,
                      std::size_t dropped_entries);
ontology::OntologyDocument ontology_from_json(const nlohmann::json &j);

Json kg_meta_to_json(const std::string &doc_id, const kg::KgResult &r);

// Parses a JSON file; throws SchemaError(0, ...) if unreadable.
nlohmann::json read_json(const std::filesystem::path &path);

}  // namespace kgforge::artifacts

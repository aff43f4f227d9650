#pragma once

// Stage 2a: relation extraction from a document and its competency
// questions.

#include <string>
#include <string_view>
#include <vector>

#include "kgforge/llm.h"
#include "kgforge/types.h"

namespace kgforge::relations {

struct RelationResult {
  std::vector<ExtractedRelation> relations;
  std::vector<std::string> concepts;
  std::string raw_response;
};

// Lowercase, whitespace-collapsed relation name used for deduplication.
std::string normalize_name(std::string_view name);

// Parses "(name, usage comment)" lines, splitting at the first comma only.
// Lines after a "Concepts:" header are collected as concepts instead.
// Duplicate names keep the first occurrence. A reply with no tuples is an
// empty result when it says so explicitly ("don't know", "no valid ...",
// "none" or blank) and a ParseFailure otherwise.
RelationResult parse_relations(std::string_view response,
                               const std::string &doc_id);

// Throws std::invalid_argument when `cqs` is empty.
RelationResult extract_relations(llm::Gateway &gateway,
                                 const llm::RequestSettings &settings,
                                 const Document &document,
                                 const std::vector<CompetencyQuestion> &cqs);

}  // namespace kgforge::relations

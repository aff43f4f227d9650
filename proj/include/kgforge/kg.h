#pragma once

// Stage 4: knowledge-graph generation grounded in the stage-3 ontology.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/llm.h"
#include "kgforge/ontology.h"
#include "kgforge/rdf.h"
#include "kgforge/types.h"

namespace kgforge::kg {

struct KgOptions {
  // One generation call per answered QA pair instead of one per document.
  bool per_pair = false;
};

struct KgResult {
  rdf::Graph graph;
  std::size_t skipped_statements = 0;
  std::size_t dropped_off_ontology = 0;
  std::size_t calls = 0;
  std::vector<std::string> raw_responses;
};

// "Q: ...\nA: ..." blocks separated by a blank line; unanswered pairs are
// left out.
std::string format_qa(const std::vector<QAPair> &qa);

struct ClosureResult {
  rdf::Graph graph;
  std::size_t dropped = 0;
};

// Drops triples whose predicate lies in the wdt: namespace but names no
// ontology property. Local names compare case-insensitively. Predicates in
// other namespaces are kept.
ClosureResult enforce_ontology_closure(const rdf::Graph &graph,
                                       const ontology::OntologyDocument &ont);

// wd: IRI for an entity label ("Mohammad Firouzi" ->
// wd:Mohammad_Firouzi). Throws std::invalid_argument if nothing usable is
// left.
rdf::Term mint_entity_iri(std::string_view label);

// Parses a generation reply leniently with the ontology prefixes seeded and
// applies the closure.
KgResult parse_kg_response(std::string_view response,
                           const ontology::OntologyDocument &ont);

// No LLM call when there is no answered pair or the ontology is empty.
KgResult build_kg(llm::Gateway &gateway, const llm::RequestSettings &settings,
                  const Document &document, const std::vector<QAPair> &qa,
                  const ontology::OntologyDocument &ont,
                  const KgOptions &options = {});

}  // namespace kgforge::kg

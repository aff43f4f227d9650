#include "kgforge/kg.h"

#include <set>
#include <stdexcept>

#include "kgforge/text.h"

namespace kgforge::kg {

std::string format_qa(const std::vector<QAPair> &qa) {
  std::string out;
  for (const auto &p : qa) {
    if (!p.answered) continue;
    if (!out.empty()) out += "\n\n";
    out += "Q: " + p.question.text + "\nA: " + p.answer;
  }
  return out;
}

ClosureResult enforce_ontology_closure(const rdf::Graph &graph,
                                       const ontology::OntologyDocument &ont) {
  std::set<std::string> allowed;
  for (const auto &e : ont.entries) allowed.insert(text::to_lower(e.pascal_label));
  ClosureResult result{rdf::Graph(graph.prefixes()), 0};
  for (const auto &t : graph.triples()) {
    const std::string &p = t.predicate.as_iri().value;
    if (p.rfind(rdf::ns::kWdt, 0) == 0 &&
        !allowed.count(text::to_lower(p.substr(rdf::ns::kWdt.size())))) {
      ++result.dropped;
      continue;
    }
    result.graph.add(t);
  }
  return result;
}

rdf::Term mint_entity_iri(std::string_view label) {
  std::string local = ontology::class_local_name(label);
  if (local.empty()) {
    throw std::invalid_argument("no usable characters in entity label");
  }
  return rdf::Term::iri(std::string(rdf::ns::kWd) + local);
}

KgResult parse_kg_response(std::string_view response,
                           const ontology::OntologyDocument &ont) {
  rdf::PrefixMap seed = rdf::standard_prefixes();
  for (const auto &[label, ns] : ont.graph.prefixes()) seed[label] = ns;
  rdf::Extraction ex = rdf::extract_valid_triples(response, seed);
  ClosureResult closed = enforce_ontology_closure(ex.graph, ont);
  KgResult result;
  result.graph = std::move(closed.graph);
  result.skipped_statements = ex.skipped;
  result.dropped_off_ontology = closed.dropped;
  result.raw_responses.emplace_back(response);
  return result;
}

KgResult build_kg(llm::Gateway &gateway, const llm::RequestSettings &settings,
                  const Document &document, const std::vector<QAPair> &qa,
                  const ontology::OntologyDocument &ont,
                  const KgOptions &options) {
  KgResult result;
  result.graph = rdf::Graph(rdf::standard_prefixes());
  std::vector<std::vector<QAPair>> batches;
  if (options.per_pair) {
    for (const auto &p : qa) {
      if (p.answered) batches.push_back({p});
    }
  } else if (!format_qa(qa).empty()) {
    batches.push_back(qa);
  }
  if (ont.empty()) return result;

  for (const auto &batch : batches) {
    std::string reply = llm::ask(gateway, settings, llm::TemplateName::kKgGeneration,
                                 {{"ont", ont.text},
                                  {"doc", document.text},
                                  {"qa", format_qa(batch)}});
    ++result.calls;
    KgResult part = parse_kg_response(reply, ont);
    for (const auto &[label, ns] : part.graph.prefixes()) {
      result.graph.set_prefix(label, ns);
    }
    for (const auto &t : part.graph.triples()) result.graph.add(t);
    result.skipped_statements += part.skipped_statements;
    result.dropped_off_ontology += part.dropped_off_ontology;
    result.raw_responses.push_back(std::move(reply));
  }
  return result;
}

}  // namespace kgforge::kg

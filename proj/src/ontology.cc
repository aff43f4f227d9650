#include "kgforge/ontology.h"

#include <algorithm>
#include <map>
#include <set>

#include "kgforge/error.h"
#include "kgforge/text.h"

namespace kgforge::ontology {

namespace {

bool is_local_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

std::string quote(std::string_view s) {
  rdf::Graph g;
  g.add(rdf::Term::blank("x"), rdf::Term::iri("urn:p"),
        rdf::Term::literal(std::string(s)));
  // Reuse the serializer's escaping: `_:x <urn:p> "..." .`
  std::string t = rdf::serialize_turtle(g);
  auto open = t.find('"');
  auto close = t.rfind('"');
  return t.substr(open, close - open + 1);
}

std::vector<std::string> objects_of(const rdf::Graph &g, const rdf::Term &s,
                                    const std::string &predicate) {
  std::vector<std::string> out;
  for (const auto &t : g.triples()) {
    if (t.subject != s || t.predicate.as_iri().value != predicate) continue;
    if (t.object.is_iri()) {
      out.push_back(class_label_from_local(rdf::local_name(t.object.as_iri().value)));
    } else {
      out.push_back(t.object.text());
    }
  }
  return out;
}

std::optional<std::string> first_literal(const rdf::Graph &g,
                                         const rdf::Term &s,
                                         const std::string &predicate) {
  for (const auto &t : g.triples()) {
    if (t.subject == s && t.predicate.as_iri().value == predicate &&
        t.object.is_literal() && !text::trim(t.object.text()).empty()) {
      return t.object.text();
    }
  }
  return std::nullopt;
}

std::string pascal_from_local(std::string_view local) {
  std::string spaced(local);
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  return catalog::pascal_case(spaced);
}

}  // namespace

std::vector<OntologyEntry> format_wikidata_entries(
    const std::vector<catalog::PropertyEntry> &props) {
  std::vector<OntologyEntry> out;
  out.reserve(props.size());
  for (const auto &p : props) {
    out.push_back({p.pascal_label, p.description, p.label, p.domains, p.ranges,
                   p.pid});
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.pascal_label < b.pascal_label;
  });
  return out;
}

std::string format_relation_lines(const std::vector<ExtractedRelation> &minted,
                                  const std::vector<std::string> &concepts) {
  std::string out;
  for (const auto &r : minted) {
    if (!out.empty()) out += '\n';
    out += "(" + r.name + ", " + r.name + ": " + r.usage_comment + ")";
  }
  if (!concepts.empty()) {
    out += "\nConcepts: ";
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      if (i) out += ", ";
      out += concepts[i];
    }
  }
  return out;
}

std::string repair_class_names(std::string_view turtle) {
  std::string out;
  bool first = true;
  for (const std::string &line : text::split_lines(turtle)) {
    if (!first) out += '\n';
    first = false;
    std::size_t key = line.find("rdfs:domain");
    std::size_t key_len = 11;
    if (key == std::string::npos) {
      key = line.find("rdfs:range");
      key_len = 10;
    }
    if (key == std::string::npos || line.find_first_of("\"<", key) != std::string::npos) {
      out += line;
      continue;
    }
    std::string head = line.substr(0, key + key_len);
    std::string rest = line.substr(key + key_len);
    std::string trimmed = text::trim(rest);
    std::string terminator;
    if (!trimmed.empty() && (trimmed.back() == ';' || trimmed.back() == '.')) {
      terminator = std::string(" ") + trimmed.back();
      trimmed = text::trim(std::string_view(trimmed).substr(0, trimmed.size() - 1));
    }
    std::string rebuilt;
    std::size_t start = 0;
    while (start <= trimmed.size()) {
      std::size_t end = trimmed.find(',', start);
      if (end == std::string::npos) end = trimmed.size();
      std::string item = text::trim(std::string_view(trimmed).substr(start, end - start));
      start = end + 1;
      if (item.empty()) continue;
      auto colon = item.find(':');
      if (colon != std::string::npos) {
        item = item.substr(0, colon + 1) +
               class_local_name(std::string_view(item).substr(colon + 1));
      }
      if (!rebuilt.empty()) rebuilt += ", ";
      rebuilt += item;
    }
    out += head + " " + rebuilt + terminator;
  }
  return out;
}

AuthoredEntries parse_authored_entries(
    std::string_view response, const std::vector<ExtractedRelation> &minted) {
  AuthoredEntries result;
  result.raw_response = std::string(response);
  rdf::Extraction ex = rdf::extract_valid_triples(repair_class_names(response),
                                                  rdf::standard_prefixes());
  result.dropped = ex.skipped;

  std::map<std::string, const ExtractedRelation *> by_pascal;
  for (const auto &r : minted) {
    try {
      by_pascal.emplace(catalog::pascal_case(r.name), &r);
    } catch (const EmptyResult &) {
    }
  }

  const std::string property_class = std::string(rdf::ns::kWikibase) + "Property";
  const std::string schema_description = std::string(rdf::ns::kSchema) + "description";
  const std::string rdfs = std::string(rdf::ns::kRdfs);
  std::set<std::string> seen;
  for (const auto &t : ex.graph.triples()) {
    if (t.predicate.as_iri().value != rdf::kRdfType || !t.object.is_iri() ||
        t.object.as_iri().value != property_class || !t.subject.is_iri()) {
      continue;
    }
    OntologyEntry e;
    try {
      e.pascal_label = pascal_from_local(rdf::local_name(t.subject.as_iri().value));
    } catch (const EmptyResult &) {
      ++result.dropped;
      continue;
    }
    if (!seen.insert(e.pascal_label).second) continue;
    auto rel = by_pascal.find(e.pascal_label);
    const ExtractedRelation *source = rel == by_pascal.end() ? nullptr : rel->second;
    e.description = first_literal(ex.graph, t.subject, schema_description)
                        .value_or(first_literal(ex.graph, t.subject, rdfs + "comment")
                                      .value_or(source ? source->usage_comment : ""));
    e.label = first_literal(ex.graph, t.subject, rdfs + "label")
                  .value_or(source ? source->name
                                   : class_label_from_local(rdf::local_name(
                                         t.subject.as_iri().value)));
    if (text::trim(e.description).empty() || text::trim(e.label).empty()) {
      ++result.dropped;
      continue;
    }
    e.domains = objects_of(ex.graph, t.subject, rdfs + "domain");
    e.ranges = objects_of(ex.graph, t.subject, rdfs + "range");
    result.entries.push_back(std::move(e));
  }
  if (result.entries.empty()) {
    throw ParseFailure("no wikibase:Property entries in authored ontology",
                       result.raw_response);
  }
  std::sort(result.entries.begin(), result.entries.end(),
            [](const auto &a, const auto &b) { return a.pascal_label < b.pascal_label; });
  return result;
}

AuthoredEntries author_minted_entries(
    llm::Gateway &gateway, const llm::RequestSettings &settings,
    const std::vector<ExtractedRelation> &minted,
    const std::vector<std::string> &concepts) {
  if (minted.empty()) return {};
  std::string reply = llm::ask(gateway, settings,
                               llm::TemplateName::kOntologyFormatting,
                               {{"relation", format_relation_lines(minted, concepts)}});
  return parse_authored_entries(reply, minted);
}

std::string class_local_name(std::string_view label) {
  std::string out;
  for (char c : text::trim(label)) {
    char mapped = is_local_char(c) ? c : '_';
    if (mapped == '_' && !out.empty() && out.back() == '_') continue;
    out += mapped;
  }
  while (!out.empty() && (out.front() == '_' || out.front() == '-')) out.erase(0, 1);
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string class_label_from_local(std::string_view local) {
  std::string out(local);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

OntologyDocument assemble_ontology(std::vector<OntologyEntry> wikidata_entries,
                                   std::vector<OntologyEntry> minted_entries) {
  OntologyDocument doc;
  std::set<std::string> taken;
  std::vector<OntologyEntry> all;
  for (auto &e : wikidata_entries) {
    if (taken.insert(e.pascal_label).second) all.push_back(std::move(e));
  }
  std::sort(minted_entries.begin(), minted_entries.end(),
            [](const auto &a, const auto &b) { return a.pascal_label < b.pascal_label; });
  for (auto &e : minted_entries) {
    if (taken.count(e.pascal_label)) {
      int suffix = 2;
      while (taken.count(e.pascal_label + std::to_string(suffix))) ++suffix;
      e.pascal_label += std::to_string(suffix);
      ++doc.renamed;
    }
    taken.insert(e.pascal_label);
    all.push_back(std::move(e));
  }
  std::sort(all.begin(), all.end(),
            [](const auto &a, const auto &b) { return a.pascal_label < b.pascal_label; });

  static const char *kPreambleOrder[] = {"rdf", "xsd", "rdfs", "owl",
                                         "wikibase", "schema", "wd", "wdt"};
  const auto &prefixes = rdf::standard_prefixes();
  std::string text;
  for (const char *p : kPreambleOrder) {
    text += "@prefix " + std::string(p) + ": <" + prefixes.at(p) + "> .\n";
  }
  auto class_list = [](const std::vector<std::string> &labels) {
    std::string out;
    for (const auto &l : labels) {
      std::string local = class_local_name(l);
      if (local.empty()) continue;
      if (!out.empty()) out += ", ";
      out += "wd:" + local;
    }
    return out;
  };
  for (const auto &e : all) {
    text += "\nwdt:" + e.pascal_label + " a wikibase:Property ;\n";
    text += "    schema:description " + quote(e.description) + " ;\n";
    text += "    rdfs:label " + quote(e.label);
    std::string domains = class_list(e.domains);
    std::string ranges = class_list(e.ranges);
    if (!domains.empty()) text += " ;\n    rdfs:domain " + domains;
    if (!ranges.empty()) text += " ;\n    rdfs:range " + ranges;
    text += " .\n";
  }
  doc.entries = std::move(all);
  doc.graph = rdf::parse_turtle(text);
  doc.text = std::move(text);
  return doc;
}

OntologyDocument merge_ontologies(const std::vector<OntologyDocument> &docs) {
  std::map<std::string, OntologyEntry> merged;
  for (const auto &d : docs) {
    for (const auto &e : d.entries) merged.emplace(e.pascal_label, e);
  }
  std::vector<OntologyEntry> wikidata, minted;
  for (auto &[label, e] : merged) {
    (e.minted() ? minted : wikidata).push_back(e);
  }
  return assemble_ontology(std::move(wikidata), std::move(minted));
}

}  // namespace kgforge::ontology

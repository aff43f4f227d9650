#include "kgforge/artifacts.h"

#include "kgforge/error.h"
#include "kgforge/fs.h"

namespace kgforge::artifacts {

using json = nlohmann::json;

namespace {

void require(bool ok, const std::string &what) {
  if (!ok) throw SchemaError(0, what);
}

template <typename T>
T get(const json &j, const char *field) {
  auto it = j.find(field);
  require(it != j.end(), std::string("missing field ") + field);
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw SchemaError(0, std::string("bad field ") + field);
  }
}

Json relation_json(const ExtractedRelation &r) {
  return {{"name", r.name}, {"usage_comment", r.usage_comment}, {"raw_line", r.raw_line}};
}

ExtractedRelation relation_from(const json &j, const std::string &doc_id) {
  return {get<std::string>(j, "name"), get<std::string>(j, "usage_comment"),
          doc_id, get<std::string>(j, "raw_line")};
}

}  // namespace

Json cqs_to_json(const std::string &doc_id, const cq::CqResult &r) {
  Json qs = Json::array();
  for (const auto &q : r.questions) qs.push_back({{"index", q.index}, {"text", q.text}});
  return {{"doc_id", doc_id},
          {"questions", qs},
          {"dropped", r.dropped},
          {"raw_response", r.raw_response}};
}

cq::CqResult cqs_from_json(const json &j) {
  cq::CqResult r;
  for (const auto &q : get<json>(j, "questions")) {
    r.questions.push_back({get<std::size_t>(q, "index"), get<std::string>(q, "text")});
  }
  require(!r.questions.empty(), "no questions");
  r.dropped = get<std::size_t>(j, "dropped");
  r.raw_response = get<std::string>(j, "raw_response");
  return r;
}

Json qa_to_json(const std::string &doc_id, const std::vector<QAPair> &qa) {
  Json pairs = Json::array();
  for (const auto &p : qa) {
    pairs.push_back({{"index", p.question.index},
                     {"question", p.question.text},
                     {"answer", p.answer},
                     {"answered", p.answered}});
  }
  return {{"doc_id", doc_id}, {"pairs", pairs}};
}

std::vector<QAPair> qa_from_json(const json &j) {
  std::vector<QAPair> out;
  for (const auto &p : get<json>(j, "pairs")) {
    out.push_back({{get<std::size_t>(p, "index"), get<std::string>(p, "question")},
                   get<std::string>(p, "answer"),
                   get<bool>(p, "answered")});
  }
  return out;
}

Json relations_to_json(const std::string &doc_id,
                       const relations::RelationResult &r) {
  Json rels = Json::array();
  for (const auto &rel : r.relations) rels.push_back(relation_json(rel));
  return {{"doc_id", doc_id},
          {"relations", rels},
          {"concepts", r.concepts},
          {"raw_response", r.raw_response}};
}

relations::RelationResult relations_from_json(const json &j,
                                              const std::string &doc_id) {
  relations::RelationResult r;
  for (const auto &rel : get<json>(j, "relations")) {
    r.relations.push_back(relation_from(rel, doc_id));
  }
  r.concepts = get<std::vector<std::string>>(j, "concepts");
  r.raw_response = get<std::string>(j, "raw_response");
  return r;
}

Json matches_to_json(const std::string &doc_id, matcher::MatchMode::Kind mode,
                     const std::vector<matcher::MatchDecision> &decisions,
                     const matcher::FinalPropertySet &final_set) {
  Json ds = Json::array();
  for (const auto &d : decisions) {
    Json e = {{"relation", relation_json(d.relation)}};
    if (d.candidate) {
      e["candidate"] = {{"pid", d.candidate->pid},
                        {"label", d.candidate->label},
                        {"pascal_label", d.candidate->pascal_label}};
    } else {
      e["candidate"] = nullptr;
    }
    e["similarity"] = d.similarity;
    e["validated"] = d.validated;
    e["outcome"] = matcher::to_string(d.outcome);
    e["via_alias"] = d.via_alias;
    e["malformed_reply"] = d.malformed_reply;
    e["reply"] = d.reply;
    ds.push_back(std::move(e));
  }
  Json pids = Json::array();
  for (const auto &e : final_set.wikidata) pids.push_back(e.pid);
  Json minted = Json::array();
  for (const auto &r : final_set.minted) minted.push_back(relation_json(r));
  return {{"doc_id", doc_id},
          {"mode", matcher::to_string(mode)},
          {"decisions", ds},
          {"final", {{"wikidata", pids}, {"minted", minted}}}};
}

matcher::FinalPropertySet matches_from_json(const json &j,
                                            const catalog::Catalog &catalog,
                                            matcher::MatchMode::Kind mode) {
  require(get<std::string>(j, "mode") == matcher::to_string(mode),
          "matches were computed in another mode");
  std::string doc_id = get<std::string>(j, "doc_id");
  json final_set = get<json>(j, "final");
  matcher::FinalPropertySet out;
  for (const auto &pid : get<std::vector<std::string>>(final_set, "wikidata")) {
    const auto *e = catalog.by_pid(pid);
    require(e != nullptr, "pid " + pid + " not in catalog");
    out.wikidata.push_back(*e);
  }
  for (const auto &r : get<json>(final_set, "minted")) {
    out.minted.push_back(relation_from(r, doc_id));
  }
  require(mode == matcher::MatchMode::Kind::kUnconstrained || out.minted.empty(),
          "minted properties in constrained mode");
  return out;
}

Json ontology_to_json(const ontology::OntologyDocument &doc,
                      std::size_t dropped_entries) {
  Json entries = Json::array();
  for (const auto &e : doc.entries) {
    entries.push_back({{"pascal_label", e.pascal_label},
                       {"label", e.label},
                       {"description", e.description},
                       {"domains", e.domains},
                       {"ranges", e.ranges},
                       {"pid", e.wikidata_pid ? Json(*e.wikidata_pid) : Json(nullptr)}});
  }
  return {{"entries", entries},
          {"renamed", doc.renamed},
          {"dropped_entries", dropped_entries}};
}

ontology::OntologyDocument ontology_from_json(const json &j) {
  std::vector<ontology::OntologyEntry> wikidata, minted;
  for (const auto &e : get<json>(j, "entries")) {
    ontology::OntologyEntry entry{get<std::string>(e, "pascal_label"),
                                  get<std::string>(e, "description"),
                                  get<std::string>(e, "label"),
                                  get<std::vector<std::string>>(e, "domains"),
                                  get<std::vector<std::string>>(e, "ranges"),
                                  std::nullopt};
    json pid = get<json>(e, "pid");
    if (pid.is_string()) entry.wikidata_pid = pid.get<std::string>();
    (entry.minted() ? minted : wikidata).push_back(std::move(entry));
  }
  // Entries were stored after renaming, so assembling again renames nothing.
  auto doc = ontology::assemble_ontology(std::move(wikidata), std::move(minted));
  doc.renamed = get<std::size_t>(j, "renamed");
  return doc;
}

Json kg_meta_to_json(const std::string &doc_id, const kg::KgResult &r) {
  return {{"doc_id", doc_id},
          {"triples", r.graph.size()},
          {"skipped_statements", r.skipped_statements},
          {"dropped_off_ontology", r.dropped_off_ontology},
          {"calls", r.calls},
          {"raw_responses", r.raw_responses}};
}

json read_json(const std::filesystem::path &path) {
  auto data = fs::try_read_file(path);
  require(data.has_value(), "missing " + path.string());
  try {
    return json::parse(*data);
  } catch (const json::exception &) {
    throw SchemaError(0, "invalid JSON in " + path.string());
  }
}

}  // namespace kgforge::artifacts

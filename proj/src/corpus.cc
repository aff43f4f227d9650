#include "kgforge/corpus.h"

#include <set>

#include "json.hpp"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/text.h"

namespace kgforge::corpus {

using json = nlohmann::json;

namespace {

std::vector<GoldTriple> parse_triples(const json &j, std::size_t line) {
  if (!j.is_array()) throw SchemaError(line, "triples must be an array");
  std::vector<GoldTriple> out;
  for (const auto &t : j) {
    if (!t.is_array() || t.size() != 3) {
      throw SchemaError(line, "each triple must be [subject, predicate, object]");
    }
    for (const auto &e : t) {
      if (!e.is_string() || text::trim(e.get<std::string>()).empty()) {
        throw SchemaError(line, "triple elements must be non-empty strings");
      }
    }
    out.push_back({t[0].get<std::string>(), t[1].get<std::string>(),
                   t[2].get<std::string>()});
  }
  return out;
}

template <typename Fn>
void for_each_record(const std::filesystem::path &path, Fn fn) {
  std::string data = fs::read_file(path);
  std::size_t line_no = 0;
  for (const auto &line : text::split_lines(data)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception &) {
      throw SchemaError(line_no, "not valid JSON");
    }
    if (!j.is_object()) throw SchemaError(line_no, "record must be an object");
    fn(j, line_no);
  }
}

std::string required_string(const json &j, const char *field, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw SchemaError(line, std::string("missing string field '") + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Document> load_corpus(const std::filesystem::path &path) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  for_each_record(path, [&](const json &j, std::size_t line) {
    Document d;
    d.id = required_string(j, "id", line);
    d.text = required_string(j, "text", line);
    if (text::trim(d.id).empty()) throw SchemaError(line, "empty id");
    if (d.id.find_first_of("/\\") != std::string::npos || d.id == "." || d.id == "..") {
      throw SchemaError(line, "id cannot be used as a directory name");
    }
    if (!ids.insert(d.id).second) throw SchemaError(line, "duplicate id " + d.id);
    if (auto g = j.find("gold"); g != j.end() && !g->is_null()) {
      d.gold = parse_triples(*g, line);
    }
    docs.push_back(std::move(d));
  });
  return docs;
}

std::map<std::string, std::vector<GoldTriple>> load_gold(
    const std::filesystem::path &path) {
  std::map<std::string, std::vector<GoldTriple>> out;
  for_each_record(path, [&](const json &j, std::size_t line) {
    std::string id;
    std::vector<GoldTriple> triples;
    if (j.contains("doc_id")) {
      id = required_string(j, "doc_id", line);
      if (!j.contains("triples")) throw SchemaError(line, "missing field 'triples'");
      triples = parse_triples(j["triples"], line);
    } else {
      id = required_string(j, "id", line);
      if (!j.contains("gold")) throw SchemaError(line, "missing field 'gold'");
      triples = parse_triples(j["gold"], line);
    }
    if (!out.emplace(id, std::move(triples)).second) {
      throw SchemaError(line, "duplicate doc_id " + id);
    }
  });
  return out;
}

std::string format_document(const Document &doc) {
  json j = {{"id", doc.id}, {"text", doc.text}};
  if (doc.gold) {
    json triples = json::array();
    for (const auto &t : *doc.gold) triples.push_back({t.subject, t.predicate, t.object});
    j["gold"] = triples;
  }
  return j.dump();
}

}  // namespace kgforge::corpus

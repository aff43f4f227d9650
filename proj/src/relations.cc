#include "kgforge/relations.h"

#include <set>
#include <stdexcept>

#include "kgforge/cq.h"
#include "kgforge/error.h"
#include "kgforge/text.h"

namespace kgforge::relations {

namespace {

bool is_concepts_header(const std::string &line) {
  std::string l = text::to_lower(line);
  std::size_t i = l.find_first_not_of("#* \t");
  return i != std::string::npos && l.compare(i, 8, "concepts") == 0;
}

std::string strip_bullet(std::string line) {
  line = text::trim(line);
  while (!line.empty() && (line[0] == '-' || line[0] == '*')) {
    line = text::trim(std::string_view(line).substr(1));
  }
  return line;
}

bool says_nothing_found(std::string_view response) {
  std::string t = text::trim(response);
  if (t.empty()) return true;
  std::string l = text::to_lower(t);
  return l.find("don't know") != std::string::npos ||
         l.find("no valid") != std::string::npos || l == "none" ||
         l == "none." || l.find("no relation") != std::string::npos;
}

}  // namespace

std::string normalize_name(std::string_view name) {
  return text::normalize_space(name);
}

RelationResult parse_relations(std::string_view response,
                               const std::string &doc_id) {
  RelationResult result;
  result.raw_response = std::string(response);
  std::set<std::string> seen_names;
  std::set<std::string> seen_concepts;
  bool in_concepts = false;
  for (const std::string &raw : text::split_lines(response)) {
    std::string line = strip_bullet(raw);
    if (line.empty()) continue;
    if (is_concepts_header(line)) {
      in_concepts = true;
      // "Concepts: a, b, c" on one line.
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      line = text::trim(std::string_view(line).substr(colon + 1));
      if (line.empty()) continue;
    }
    if (in_concepts) {
      if (line.front() == '(' && line.back() == ')') {
        line = line.substr(1, line.size() - 2);
      }
      std::size_t start = 0;
      while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        std::string c = text::trim(std::string_view(line).substr(start, end - start));
        if (!c.empty() && seen_concepts.insert(text::normalize_space(c)).second) {
          result.concepts.push_back(c);
        }
        start = end + 1;
      }
      continue;
    }
    if (line.size() < 2 || line.front() != '(' || line.back() != ')') continue;
    std::string inner = line.substr(1, line.size() - 2);
    std::size_t comma = inner.find(',');
    if (comma == std::string::npos) continue;
    std::string name = normalize_name(std::string_view(inner).substr(0, comma));
    std::string comment = text::trim(std::string_view(inner).substr(comma + 1));
    if (name.empty() || comment.empty()) continue;
    if (name.find_first_of("()") != std::string::npos) continue;
    if (!seen_names.insert(name).second) continue;
    result.relations.push_back({name, comment, doc_id, text::trim(raw)});
  }
  if (result.relations.empty() && !says_nothing_found(response)) {
    throw ParseFailure("no (relation, comment) tuples recognized",
                       result.raw_response);
  }
  return result;
}

RelationResult extract_relations(llm::Gateway &gateway,
                                 const llm::RequestSettings &settings,
                                 const Document &document,
                                 const std::vector<CompetencyQuestion> &cqs) {
  if (cqs.empty()) {
    throw std::invalid_argument("relation extraction needs at least one CQ");
  }
  std::string reply = llm::ask(gateway, settings,
                               llm::TemplateName::kRelationExtraction,
                               {{"document to be processed", document.text},
                                {"CQs", cq::format_cqs(cqs)}});
  return parse_relations(reply, document.id);
}

}  // namespace kgforge::relations

#include "kgforge/eval.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kgforge/assignment.h"
#include "kgforge/error.h"
#include "kgforge/text.h"

namespace kgforge::eval {

namespace {

std::string split_words(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c == '_') {
      out += ' ';
      continue;
    }
    if (i > 0 && std::isupper(c) &&
        std::islower(static_cast<unsigned char>(s[i - 1]))) {
      out += ' ';
    }
    out += static_cast<char>(c);
  }
  return text::normalize_space(out);
}

std::set<std::string> tokens(std::string_view s) {
  std::set<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.insert(w);
  return out;
}

}  // namespace

std::string to_string(Criterion c) {
  return c == Criterion::kExact ? "exact" : "partial";
}

Criterion criterion_from_string(std::string_view s) {
  std::string l = text::to_lower(s);
  if (l == "exact") return Criterion::kExact;
  if (l == "partial") return Criterion::kPartial;
  throw std::invalid_argument("unknown criterion: " + std::string(s));
}

std::string normalize_term(const rdf::Term &term) {
  if (term.is_iri()) return split_words(rdf::local_name(term.as_iri().value));
  std::string lexical = term.text();
  if (lexical.size() >= 2 && lexical.front() == '"' && lexical.back() == '"') {
    lexical = lexical.substr(1, lexical.size() - 2);
  }
  return text::normalize_space(lexical);
}

std::string normalize_term(std::string_view s) { return split_words(s); }

Match element_match(std::string_view a, std::string_view b, double jaccard) {
  if (a == b) return Match::kExact;
  if (a.empty() || b.empty()) return Match::kNone;
  if (a.find(b) != std::string_view::npos || b.find(a) != std::string_view::npos) {
    return Match::kPartial;
  }
  auto ta = tokens(a), tb = tokens(b);
  std::size_t common = 0;
  for (const auto &t : ta) common += tb.count(t);
  std::size_t uni = ta.size() + tb.size() - common;
  if (uni > 0 && static_cast<double>(common) / static_cast<double>(uni) >= jaccard) {
    return Match::kPartial;
  }
  return Match::kNone;
}

NormTriple normalize(const rdf::Triple &t) {
  return {normalize_term(t.subject), normalize_term(t.predicate),
          normalize_term(t.object)};
}

NormTriple normalize(const GoldTriple &t) {
  return {normalize_term(t.subject), normalize_term(t.predicate),
          normalize_term(t.object)};
}

bool is_hit(const NormTriple &pred, const NormTriple &gold, Criterion c,
            double jaccard) {
  Match need = c == Criterion::kExact ? Match::kExact : Match::kPartial;
  return element_match(pred.s, gold.s, jaccard) >= need &&
         element_match(pred.p, gold.p, jaccard) >= need &&
         element_match(pred.o, gold.o, jaccard) >= need;
}

Alignment align(const std::vector<NormTriple> &predicted,
                const std::vector<NormTriple> &gold, Criterion c,
                double jaccard) {
  Alignment out;
  const std::size_t n = predicted.size(), m = gold.size();
  if (n == 0 || m == 0) return out;
  // A pair's element score is at most 10*3 + 3 = 33, so a hit bonus above
  // 33 * min(n, m) dominates any number of element scores.
  const long long hit_bonus = 34LL * static_cast<long long>(std::min(n, m)) + 1;
  std::vector<std::vector<long long>> w(n, std::vector<long long>(m, 0));
  std::vector<std::vector<bool>> hit(n, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Match ms[3] = {element_match(predicted[i].s, gold[j].s, jaccard),
                     element_match(predicted[i].p, gold[j].p, jaccard),
                     element_match(predicted[i].o, gold[j].o, jaccard)};
      long long partial = 0, exact = 0;
      for (Match x : ms) {
        partial += x >= Match::kPartial;
        exact += x == Match::kExact;
      }
      hit[i][j] = c == Criterion::kExact ? exact == 3 : partial == 3;
      w[i][j] = (hit[i][j] ? hit_bonus : 0) + 10 * partial + exact;
    }
  }
  auto assignment = max_weight_assignment(
      n, m, [&](std::size_t i, std::size_t j) { return w[i][j]; });
  for (std::size_t i = 0; i < n; ++i) {
    if (assignment[i] < 0) continue;
    auto j = static_cast<std::size_t>(assignment[i]);
    out.pairs.emplace_back(i, j);
    out.hits += hit[i][j];
  }
  return out;
}

void finalize(EvalReport &r) {
  if (r.predicted == 0 && r.gold == 0) {
    r.micro_precision = r.micro_recall = r.micro_f1 = 1.0;
    return;
  }
  r.micro_precision = r.predicted ? static_cast<double>(r.hits) / r.predicted : 0.0;
  r.micro_recall = r.gold ? static_cast<double>(r.hits) / r.gold : 0.0;
  double sum = r.micro_precision + r.micro_recall;
  r.micro_f1 = sum > 0 ? 2 * r.micro_precision * r.micro_recall / sum : 0.0;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["criterion"] = to_string(criterion);
  j["micro_precision"] = micro_precision;
  j["micro_recall"] = micro_recall;
  j["micro_f1"] = micro_f1;
  j["hits"] = hits;
  j["predicted"] = predicted;
  j["gold"] = gold;
  j["per_doc"] = nlohmann::ordered_json::array();
  for (const auto &d : per_doc) {
    j["per_doc"].push_back({{"doc_id", d.doc_id},
                            {"hits", d.hits},
                            {"predicted", d.predicted},
                            {"gold", d.gold}});
  }
  return j;
}

std::string EvalReport::table() const {
  std::size_t width = 8;
  for (const auto &d : per_doc) width = std::max(width, d.doc_id.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %6s %9s %6s\n", static_cast<int>(width),
                "document", "hits", "predicted", "gold");
  out += buf;
  for (const auto &d : per_doc) {
    std::snprintf(buf, sizeof buf, "%-*s %6zu %9zu %6zu\n",
                  static_cast<int>(width), d.doc_id.c_str(), d.hits,
                  d.predicted, d.gold);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-*s %6zu %9zu %6zu\n", static_cast<int>(width),
                "total", hits, predicted, gold);
  out += buf;
  std::snprintf(buf, sizeof buf, "%s  P=%.4f  R=%.4f  F1=%.4f\n",
                to_string(criterion).c_str(), micro_precision, micro_recall,
                micro_f1);
  out += buf;
  return out;
}

EvalReport evaluate_corpus(
    const std::vector<std::pair<std::string, rdf::Graph>> &results,
    const std::map<std::string, std::vector<GoldTriple>> &gold, Criterion c,
    double jaccard) {
  EvalReport report;
  report.criterion = c;
  for (const auto &[doc_id, graph] : results) {
    auto g = gold.find(doc_id);
    if (g == gold.end()) throw MissingGold(doc_id);
    std::vector<NormTriple> pred, ref;
    for (const auto &t : graph.triples()) pred.push_back(normalize(t));
    for (const auto &t : g->second) ref.push_back(normalize(t));
    DocScore d{doc_id, align(pred, ref, c, jaccard).hits, pred.size(), ref.size()};
    report.hits += d.hits;
    report.predicted += d.predicted;
    report.gold += d.gold;
    report.per_doc.push_back(std::move(d));
  }
  finalize(report);
  return report;
}

}  // namespace kgforge::eval

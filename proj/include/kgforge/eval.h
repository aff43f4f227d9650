#pragma once

// Exact and Partial triple scoring with one-to-one optimal alignment.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kgforge/rdf.h"
#include "kgforge/types.h"

namespace kgforge::eval {

enum class Criterion { kExact, kPartial };
std::string to_string(Criterion c);
// "exact" / "partial", any case. Throws std::invalid_argument.
Criterion criterion_from_string(std::string_view s);

enum class Match { kNone = 0, kPartial = 1, kExact = 2 };

// IRIs: local name, '_' -> ' ', camel-case split, lowercase, collapsed
// whitespace. Literals: lexical form lowercased and collapsed.
std::string normalize_term(const rdf::Term &term);
// Gold strings: same rules as an IRI local name, without the '/' split.
std::string normalize_term(std::string_view s);

// Inputs already normalized. Partial: substring either way or token-set
// Jaccard >= `jaccard`.
Match element_match(std::string_view a, std::string_view b,
                    double jaccard = 0.5);

struct NormTriple {
  std::string s, p, o;
  bool operator==(const NormTriple &) const = default;
};

NormTriple normalize(const rdf::Triple &t);
NormTriple normalize(const GoldTriple &t);

bool is_hit(const NormTriple &pred, const NormTriple &gold, Criterion c,
            double jaccard = 0.5);

struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (pred, gold)
  std::size_t hits = 0;
};

// Optimal one-to-one alignment. Objective, in priority order: hits under
// `c`, elements matching at least Partially, Exact elements.
Alignment align(const std::vector<NormTriple> &predicted,
                const std::vector<NormTriple> &gold, Criterion c,
                double jaccard = 0.5);

struct DocScore {
  std::string doc_id;
  std::size_t hits = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

struct EvalReport {
  Criterion criterion = Criterion::kPartial;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  std::size_t hits = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::vector<DocScore> per_doc;

  nlohmann::ordered_json to_json() const;
  std::string table() const;
};

// P = hits/predicted, R = hits/gold, F1 harmonic mean. Zero denominators
// give 0, except predicted = gold = 0 which gives 1/1/1.
void finalize(EvalReport &report);

// `results` are (doc id, predicted graph). Throws MissingGold for a doc id
// absent from `gold`.
EvalReport evaluate_corpus(
    const std::vector<std::pair<std::string, rdf::Graph>> &results,
    const std::map<std::string, std::vector<GoldTriple>> &gold, Criterion c,
    double jaccard = 0.5);

}  // namespace kgforge::eval

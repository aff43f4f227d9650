#pragma once

// Stage 2b: align extracted relations with the property catalog.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgforge/catalog.h"
#include "kgforge/embedding.h"
#include "kgforge/llm.h"
#include "kgforge/types.h"

namespace kgforge::matcher {

struct MatchMode {
  enum class Kind { kConstrained, kUnconstrained };
  Kind kind = Kind::kUnconstrained;
  // Allowed pascal labels; only meaningful for kConstrained.
  std::optional<std::set<std::string>> target;

  static MatchMode constrained(std::optional<std::set<std::string>> target = {}) {
    return {Kind::kConstrained, std::move(target)};
  }
  static MatchMode unconstrained() { return {Kind::kUnconstrained, {}}; }
  bool is_constrained() const { return kind == Kind::kConstrained; }
};

std::string to_string(MatchMode::Kind kind);

enum class Outcome { kMatchedExisting, kKeptNew, kDiscarded };
std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string &s);

struct MatchDecision {
  ExtractedRelation relation;
  std::optional<catalog::PropertyEntry> candidate;
  double similarity = 0.0;
  bool validated = false;
  Outcome outcome = Outcome::kDiscarded;
  MatchMode::Kind mode = MatchMode::Kind::kUnconstrained;
  std::string reply;        // raw validator reply
  bool via_alias = false;   // decided by the alias map, no LLM call
  bool malformed_reply = false;
};

struct FinalPropertySet {
  std::vector<catalog::PropertyEntry> wikidata;   // sorted by pid, unique
  std::vector<ExtractedRelation> minted;          // unique normalized names
};

enum class EmbedText { kLabeled, kDescriptionOnly };

// "<label>: <description>" or the description alone.
std::string entry_text(const catalog::PropertyEntry &e, EmbedText mode);
// "<name>: <usage comment>" or the comment alone.
std::string relation_text(const ExtractedRelation &r, EmbedText mode);

// Index over the catalog, or over the target entries when the mode carries a
// target. Record ids are pids.
embedding::EmbeddingIndex build_index(const catalog::Catalog &catalog,
                                      const MatchMode &mode,
                                      embedding::Embedder &embedder,
                                      EmbedText text = EmbedText::kLabeled);

// "yes" -> true, "no" -> false, anything else -> nullopt. Only the first
// word counts, ignoring case and surrounding punctuation.
std::optional<bool> parse_validation(const std::string &reply);

struct MatcherContext {
  const catalog::Catalog &catalog;
  const embedding::EmbeddingIndex &index;
  embedding::Embedder &embedder;
  llm::Gateway &gateway;
  llm::RequestSettings settings;
  EmbedText text = EmbedText::kLabeled;
  // relation name (normalized) -> pascal label; bypasses retrieval and
  // validation.
  std::map<std::string, std::string> aliases;
};

// Throws EmptyCatalog when the catalog or index is empty.
MatchDecision match_relation(const ExtractedRelation &relation,
                             MatcherContext &ctx, const MatchMode &mode);

// Throws ModeMismatch when a decision was made under another mode or its
// outcome is impossible under `mode`.
FinalPropertySet build_final_property_set(
    const std::vector<MatchDecision> &decisions, const MatchMode &mode);

}  // namespace kgforge::matcher

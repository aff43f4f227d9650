#include "kgforge/matcher.h"

#include <algorithm>
#include <cctype>

#include "kgforge/error.h"
#include "kgforge/relations.h"
#include "kgforge/text.h"

namespace kgforge::matcher {

std::string to_string(MatchMode::Kind kind) {
  return kind == MatchMode::Kind::kConstrained ? "constrained" : "unconstrained";
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kMatchedExisting: return "matched_existing";
    case Outcome::kKeptNew: return "kept_new";
    case Outcome::kDiscarded: return "discarded";
  }
  return "discarded";
}

Outcome outcome_from_string(const std::string &s) {
  if (s == "matched_existing") return Outcome::kMatchedExisting;
  if (s == "kept_new") return Outcome::kKeptNew;
  if (s == "discarded") return Outcome::kDiscarded;
  throw Error("unknown match outcome '" + s + "'");
}

std::string entry_text(const catalog::PropertyEntry &e, EmbedText mode) {
  return mode == EmbedText::kLabeled ? e.label + ": " + e.description
                                     : e.description;
}

std::string relation_text(const ExtractedRelation &r, EmbedText mode) {
  return mode == EmbedText::kLabeled ? r.name + ": " + r.usage_comment
                                     : r.usage_comment;
}

embedding::EmbeddingIndex build_index(const catalog::Catalog &catalog,
                                      const MatchMode &mode,
                                      embedding::Embedder &embedder,
                                      EmbedText text) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto &e : catalog.entries()) {
    if (mode.is_constrained() && mode.target &&
        !mode.target->count(e.pascal_label)) {
      continue;
    }
    items.emplace_back(e.pid, entry_text(e, text));
  }
  return embedding::EmbeddingIndex::build(items, embedder);
}

std::optional<bool> parse_validation(const std::string &reply) {
  std::string t = text::trim(reply);
  std::size_t i = 0;
  while (i < t.size() && !std::isalpha(static_cast<unsigned char>(t[i]))) ++i;
  std::size_t j = i;
  while (j < t.size() && std::isalpha(static_cast<unsigned char>(t[j]))) ++j;
  std::string word = text::to_lower(std::string_view(t).substr(i, j - i));
  if (word == "yes") return true;
  if (word == "no") return false;
  return std::nullopt;
}

namespace {

Outcome rejected_outcome(const MatchMode &mode) {
  return mode.is_constrained() ? Outcome::kDiscarded : Outcome::kKeptNew;
}

bool in_target(const MatchMode &mode, const catalog::PropertyEntry &e) {
  return !mode.is_constrained() || !mode.target ||
         mode.target->count(e.pascal_label) > 0;
}

}  // namespace

MatchDecision match_relation(const ExtractedRelation &relation,
                             MatcherContext &ctx, const MatchMode &mode) {
  if (ctx.catalog.empty() || ctx.index.empty()) throw EmptyCatalog();
  MatchDecision d;
  d.relation = relation;
  d.mode = mode.kind;

  auto query = ctx.embedder.embed({relation_text(relation, ctx.text)}).front();

  auto alias = ctx.aliases.find(relations::normalize_name(relation.name));
  if (alias != ctx.aliases.end()) {
    const catalog::PropertyEntry *e = ctx.catalog.by_pascal(alias->second);
    if (!e) throw Error("alias target '" + alias->second + "' not in catalog");
    d.candidate = *e;
    d.via_alias = true;
    const embedding::Record *rec = ctx.index.find(e->pid);
    d.similarity = rec ? embedding::cosine(query, rec->vector) : 0.0;
    if (in_target(mode, *e)) {
      d.validated = true;
      d.outcome = Outcome::kMatchedExisting;
    } else {
      d.outcome = rejected_outcome(mode);
    }
    return d;
  }

  embedding::Hit hit = embedding::top1(query, ctx.index);
  const catalog::PropertyEntry *candidate = ctx.catalog.by_pid(hit.id);
  if (!candidate) throw Error("index entry " + hit.id + " not in catalog");
  d.candidate = *candidate;
  d.similarity = hit.score;

  d.reply = llm::ask(ctx.gateway, ctx.settings,
                     llm::TemplateName::kOntologyMatching,
                     {{"p1", relation_text(relation, EmbedText::kLabeled)},
                      {"p2", entry_text(*candidate, EmbedText::kLabeled)}});
  auto verdict = parse_validation(d.reply);
  d.malformed_reply = !verdict.has_value();
  d.validated = verdict.value_or(false);
  if (d.validated && in_target(mode, *candidate)) {
    d.outcome = Outcome::kMatchedExisting;
  } else {
    d.validated = false;
    d.outcome = rejected_outcome(mode);
  }
  return d;
}

FinalPropertySet build_final_property_set(
    const std::vector<MatchDecision> &decisions, const MatchMode &mode) {
  FinalPropertySet out;
  std::map<std::string, catalog::PropertyEntry> by_pid;
  std::set<std::string> minted_names;
  for (const auto &d : decisions) {
    if (d.mode != mode.kind) {
      throw ModeMismatch("decision for '" + d.relation.name + "' made in " +
                         to_string(d.mode) + " mode");
    }
    switch (d.outcome) {
      case Outcome::kMatchedExisting:
        if (!d.candidate) throw ModeMismatch("matched decision without candidate");
        if (in_target(mode, *d.candidate)) by_pid.emplace(d.candidate->pid, *d.candidate);
        break;
      case Outcome::kKeptNew:
        if (mode.is_constrained()) {
          throw ModeMismatch("kept-new decision in constrained mode");
        }
        if (minted_names.insert(relations::normalize_name(d.relation.name)).second) {
          out.minted.push_back(d.relation);
        }
        break;
      case Outcome::kDiscarded:
        if (!mode.is_constrained()) {
          throw ModeMismatch("discarded decision in unconstrained mode");
        }
        break;
    }
  }
  std::vector<catalog::PropertyEntry> wikidata;
  for (auto &[pid, e] : by_pid) wikidata.push_back(std::move(e));
  std::sort(wikidata.begin(), wikidata.end(), [](const auto &a, const auto &b) {
    auto na = catalog::pid_number(a.pid), nb = catalog::pid_number(b.pid);
    if (na && nb && *na != *nb) return *na < *nb;
    return a.pid < b.pid;
  });
  out.wikidata = std::move(wikidata);
  return out;
}

}  // namespace kgforge::matcher

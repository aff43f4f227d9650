#pragma once

// Random inputs for property tests.

#include <random>
#include <string>
#include <vector>

#include "kgforge/eval.h"
#include "kgforge/rdf.h"

namespace gen {

using kgforge::rdf::Graph;
using kgforge::rdf::Term;

inline std::string pick(std::mt19937 &rng, const std::vector<std::string> &v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline int uniform(std::mt19937 &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Local names that may or may not be writable as prefixed names.
inline std::string local(std::mt19937 &rng) {
  static const std::vector<std::string> parts = {
      "Tehran", "place_of_birth", "x", "Q42", "a", "b-c", "v1.2", "über",
      "San_José", "item", "3rd", "_hidden", "Mohammad_Firouzi", "ab.", "A"};
  std::string out = pick(rng, parts);
  if (uniform(rng, 0, 3) == 0) out += pick(rng, parts);
  return out;
}

inline Term iri(std::mt19937 &rng) {
  static const std::vector<std::string> ns = {
      "http://www.wikidata.org/entity/", "http://www.wikidata.org/prop/direct/",
      "http://schema.org/", "http://example.org/data/", "urn:test:",
      "http://www.w3.org/2000/01/rdf-schema#"};
  return Term::iri(pick(rng, ns) + local(rng));
}

inline std::string lexical(std::mt19937 &rng) {
  static const std::vector<std::string> parts = {
      "1958", "Tehran", "say \"hi\"", "back\\slash", "line\nbreak", "tab\there",
      "", " ", "naïve", "日本", "x.y", "# not a comment", "<not an iri>", "a;b,c",
      "emoji \xF0\x9F\x8E\xB5"};
  std::string out = pick(rng, parts);
  if (uniform(rng, 0, 2) == 0) out += " " + pick(rng, parts);
  return out;
}

inline Term object(std::mt19937 &rng) {
  switch (uniform(rng, 0, 5)) {
    case 0: return Term::literal(lexical(rng));
    case 1: return Term::typed(lexical(rng), "http://www.w3.org/2001/XMLSchema#date");
    case 2: return Term::typed(lexical(rng), "http://example.org/dt/custom");
    case 3: return Term::lang(lexical(rng), pick(rng, {"en", "fa", "en-US", "pt-BR"}));
    case 4: return Term::blank("b" + std::to_string(uniform(rng, 0, 5)));
    default: return iri(rng);
  }
}

inline Term subject(std::mt19937 &rng) {
  if (uniform(rng, 0, 5) == 0) return Term::blank("b" + std::to_string(uniform(rng, 0, 5)));
  return iri(rng);
}

inline Term predicate(std::mt19937 &rng) {
  if (uniform(rng, 0, 4) == 0) return Term::iri(kgforge::rdf::kRdfType);
  return iri(rng);
}

inline Graph graph(std::mt19937 &rng, int max_triples = 25) {
  Graph g(kgforge::rdf::standard_prefixes());
  if (uniform(rng, 0, 1)) g.set_prefix("ex", "http://example.org/data/");
  int n = uniform(rng, 0, max_triples);
  for (int i = 0; i < n; ++i) g.add(subject(rng), predicate(rng), object(rng));
  return g;
}

// Triples over a small vocabulary for alignment checks.
inline std::vector<kgforge::eval::NormTriple> norm_triples(std::mt19937 &rng, int max_n) {
  static const std::vector<std::string> vocab = {
      "tehran", "iran", "place of birth", "birth", "date of birth", "musician",
      "mohammad firouzi", "firouzi"};
  std::vector<kgforge::eval::NormTriple> out(uniform(rng, 0, max_n));
  for (auto &t : out) t = {pick(rng, vocab), pick(rng, vocab), pick(rng, vocab)};
  return out;
}

}  // namespace gen

#pragma once

// RDF terms, graphs and the Turtle subset used for ontologies and generated
// knowledge graphs.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace kgforge::rdf {

namespace ns {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs =
    "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kWikibase = "http://wikiba.se/ontology#";
inline constexpr std::string_view kSchema = "http://schema.org/";
inline constexpr std::string_view kWd = "http://www.wikidata.org/entity/";
inline constexpr std::string_view kWdt =
    "http://www.wikidata.org/prop/direct/";
}  // namespace ns

inline const std::string kRdfType = std::string(ns::kRdf) + "type";

struct Iri {
  std::string value;
  auto operator<=>(const Iri &) const = default;
};

struct Literal {
  std::string lexical;
  std::optional<std::string> datatype;
  std::optional<std::string> language;
  auto operator<=>(const Literal &) const = default;
};

struct Blank {
  std::string label;
  auto operator<=>(const Blank &) const = default;
};

// An RDF term. IRIs are always stored expanded, so a prefixed name and its
// full form compare equal.
class Term {
 public:
  // Throws std::invalid_argument on an empty IRI or one containing
  // whitespace.
  static Term iri(std::string value);
  static Term literal(std::string lexical);
  static Term typed(std::string lexical, std::string datatype);
  static Term lang(std::string lexical, std::string language);
  static Term blank(std::string label);

  bool is_iri() const { return std::holds_alternative<Iri>(value_); }
  bool is_literal() const { return std::holds_alternative<Literal>(value_); }
  bool is_blank() const { return std::holds_alternative<Blank>(value_); }

  const Iri &as_iri() const { return std::get<Iri>(value_); }
  const Literal &as_literal() const { return std::get<Literal>(value_); }
  const Blank &as_blank() const { return std::get<Blank>(value_); }

  // IRI string, literal lexical form or blank label.
  const std::string &text() const;

  // N-Triples style rendering, used in diagnostics.
  std::string debug_string() const;

  auto operator<=>(const Term &) const = default;

 private:
  explicit Term(std::variant<Iri, Literal, Blank> v) : value_(std::move(v)) {}
  std::variant<Iri, Literal, Blank> value_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;
  auto operator<=>(const Triple &) const = default;
};

// Throws std::invalid_argument if the triple breaks the positional rules:
// literal subject or non-IRI predicate.
Triple make_triple(Term subject, Term predicate, Term object);

using PrefixMap = std::map<std::string, std::string>;

class Graph {
 public:
  Graph() = default;
  explicit Graph(PrefixMap prefixes) : prefixes_(std::move(prefixes)) {}

  // Returns false if the triple was already present.
  bool add(Triple t);
  bool add(Term s, Term p, Term o) {
    return add(make_triple(std::move(s), std::move(p), std::move(o)));
  }
  bool erase(const Triple &t) { return triples_.erase(t) > 0; }
  bool contains(const Triple &t) const { return triples_.count(t) > 0; }

  void set_prefix(std::string label, std::string ns) {
    prefixes_[std::move(label)] = std::move(ns);
  }

  const std::set<Triple> &triples() const { return triples_; }
  const PrefixMap &prefixes() const { return prefixes_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

 private:
  std::set<Triple> triples_;
  PrefixMap prefixes_;
};

// The eight prefixes of the ontology preamble (rdf, xsd, rdfs, owl, wikibase,
// schema, wd, wdt).
const PrefixMap &standard_prefixes();

// Strict parse. Throws SyntaxError on the first malformed statement and
// UnknownPrefix for an undeclared prefix.
Graph parse_turtle(std::string_view text);

struct Extraction {
  Graph graph;
  std::size_t skipped = 0;  // malformed statements dropped
};

// Lenient parse: never throws. Malformed statements are skipped and parsing
// resumes after the next statement terminator. If the text contains ```
// fences only the fenced content is read. `initial` seeds the prefix map so
// that output omitting @prefix lines still resolves.
Extraction extract_valid_triples(std::string_view text,
                                 const PrefixMap &initial = {});

struct SerializeOptions {
  // When false, an IRI that no prefix covers raises MissingPrefix instead of
  // being written as <...>.
  bool allow_full_iris = true;
};

// Deterministic Turtle: prefixes by label, subjects by expanded IRI,
// predicates grouped with ';' and objects with ','.
std::string serialize_turtle(const Graph &graph,
                             const SerializeOptions &options = {});

// True if `local` can follow "prefix:" and parse back unchanged.
bool is_valid_local_name(std::string_view local);

// Local part of an IRI after the last '/' or '#'.
std::string_view local_name(std::string_view iri);

}  // namespace kgforge::rdf

#include <gtest/gtest.h>

#include <random>

#include "gen.h"
#include "kgforge/error.h"
#include "kgforge/rdf.h"

using namespace kgforge;
using namespace kgforge::rdf;

namespace {

const std::string kWd(ns::kWd);
const std::string kWdt(ns::kWdt);
const std::string kXsd(ns::kXsd);

const char *kFirouzi = R"(@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix wd: <http://www.wikidata.org/entity/> .
@prefix wdt: <http://www.wikidata.org/prop/direct/> .
wd:Mohammad_Firouzi a wd:human ;
    rdfs:label "Mohammad Firouzi"@en ;
    wdt:occupation wd:Musician ;
    wdt:CountryOfCitizenship wd:Iran ;
    wdt:PlaceOfBirth wd:Tehran ;
    wdt:DateOfBirth "1958"^^xsd:date .
)";

Triple t(const std::string &s, const std::string &p, Term o) {
  return make_triple(Term::iri(s), Term::iri(p), std::move(o));
}

// Statements of `g`, one per subject, without @prefix lines.
std::vector<std::string> statements(const Graph &g) {
  std::map<std::string, Graph> by_subject;
  for (const auto &tr : g.triples()) {
    auto &sub = by_subject.try_emplace(tr.subject.debug_string(), Graph(g.prefixes()))
                    .first->second;
    sub.add(tr);
  }
  std::vector<std::string> out;
  for (const auto &[key, sub] : by_subject) {
    std::string text = serialize_turtle(sub);
    auto cut = text.find("\n\n");
    out.push_back(text.substr(cut + 2));
  }
  return out;
}

std::string prefix_block(const Graph &g) {
  std::string out;
  for (const auto &[label, ns] : g.prefixes()) out += "@prefix " + label + ": <" + ns + "> .\n";
  return out;
}

}  // namespace

TEST(Turtle, ParsesReferenceGraph) {
  Graph g = parse_turtle(kFirouzi);
  EXPECT_EQ(g.size(), 6u);
  EXPECT_TRUE(g.contains(t(kWd + "Mohammad_Firouzi", kRdfType, Term::iri(kWd + "human"))));
  EXPECT_TRUE(g.contains(t(kWd + "Mohammad_Firouzi", std::string(ns::kRdfs) + "label",
                           Term::lang("Mohammad Firouzi", "en"))));
  EXPECT_TRUE(g.contains(t(kWd + "Mohammad_Firouzi", kWdt + "DateOfBirth",
                           Term::typed("1958", kXsd + "date"))));
  EXPECT_TRUE(g.contains(t(kWd + "Mohammad_Firouzi", kWdt + "occupation",
                           Term::iri(kWd + "Musician"))));
}

TEST(Turtle, ExpandsPrefixedAndFullIrisToSameTerm) {
  Graph a = parse_turtle("@prefix wd: <http://www.wikidata.org/entity/> .\nwd:A wd:p wd:B .");
  Graph b = parse_turtle(
      "<http://www.wikidata.org/entity/A> <http://www.wikidata.org/entity/p> "
      "<http://www.wikidata.org/entity/B> .");
  EXPECT_EQ(a.triples(), b.triples());
}

TEST(Turtle, ObjectListsAndBlankNodes) {
  Graph g = parse_turtle(
      "@prefix ex: <http://example.org/> .\n"
      "_:x ex:p ex:a, ex:b , \"c\" ;\n  ex:q _:y ;\n.\n");
  EXPECT_EQ(g.size(), 4u);
  EXPECT_TRUE(g.contains(make_triple(Term::blank("x"), Term::iri("http://example.org/q"),
                                     Term::blank("y"))));
}

TEST(Turtle, CommentsAndEscapes) {
  Graph g = parse_turtle(
      "# leading comment\n"
      "@prefix ex: <http://example.org/> . # trailing\n"
      "ex:s ex:p \"a \\\"quoted\\\" \\\\ \\u00e9 #x\" . # done\n");
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.triples().begin()->object.text(), "a \"quoted\" \\ \xC3\xA9 #x");
}

TEST(Turtle, UnknownPrefixNamesThePrefix) {
  try {
    parse_turtle("foo:a foo:b foo:c .");
    FAIL() << "expected UnknownPrefix";
  } catch (const UnknownPrefix &e) {
    EXPECT_EQ(e.prefix(), "foo");
  }
}

TEST(Turtle, SyntaxErrorReportsPosition) {
  try {
    parse_turtle("@prefix ex: <http://example.org/> .\nex:s ex:p .\n");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 11u);
  }
  EXPECT_THROW(parse_turtle("\"lit\" <urn:p> <urn:o> ."), SyntaxError);
  EXPECT_THROW(parse_turtle("<urn:s> <urn:p> \"open"), SyntaxError);
  EXPECT_THROW(parse_turtle("<urn:s> <urn:p> <urn:o>"), SyntaxError);
  EXPECT_THROW(parse_turtle("<urn:s> <urn:p> a ."), SyntaxError);
}

TEST(Turtle, EmptyDocument) {
  EXPECT_TRUE(parse_turtle("").empty());
  EXPECT_TRUE(parse_turtle("  # nothing\n").empty());
}

TEST(Turtle, SerializationIsDeterministicAndTypeFirst) {
  Graph g = parse_turtle(kFirouzi);
  std::string text = serialize_turtle(g);
  EXPECT_EQ(text, serialize_turtle(parse_turtle(text)));
  auto block = text.find("wd:Mohammad_Firouzi a wd:human ;");
  EXPECT_NE(block, std::string::npos) << text;
  EXPECT_NE(text.find("wdt:DateOfBirth \"1958\"^^xsd:date"), std::string::npos);
}

TEST(Turtle, SerializerFallsBackToFullIris) {
  Graph g;
  g.set_prefix("wd", kWd);
  g.add(Term::iri(kWd + "ok"), Term::iri("urn:p"), Term::iri(kWd + "bad.")); 
  std::string text = serialize_turtle(g);
  EXPECT_NE(text.find("<urn:p>"), std::string::npos);
  EXPECT_NE(text.find("<http://www.wikidata.org/entity/bad.>"), std::string::npos);
  EXPECT_THROW(serialize_turtle(g, {false}), MissingPrefix);
  EXPECT_EQ(parse_turtle(text).triples(), g.triples());
}

TEST(Turtle, TermFactoriesRejectInvalidInput) {
  EXPECT_THROW(Term::iri(""), std::invalid_argument);
  EXPECT_THROW(Term::iri("has space"), std::invalid_argument);
  EXPECT_THROW(Term::lang("x", ""), std::invalid_argument);
  EXPECT_THROW(make_triple(Term::literal("x"), Term::iri("urn:p"), Term::iri("urn:o")),
               std::invalid_argument);
  EXPECT_THROW(make_triple(Term::iri("urn:s"), Term::blank("b"), Term::iri("urn:o")),
               std::invalid_argument);
}

TEST(Turtle, LocalNameRules) {
  EXPECT_TRUE(is_valid_local_name("PlaceOfBirth"));
  EXPECT_TRUE(is_valid_local_name("v1.2"));
  EXPECT_TRUE(is_valid_local_name("3rd"));
  EXPECT_FALSE(is_valid_local_name("ab."));
  EXPECT_FALSE(is_valid_local_name("-x"));
  EXPECT_FALSE(is_valid_local_name("a b"));
  EXPECT_EQ(local_name("http://www.wikidata.org/prop/direct/PlaceOfBirth"), "PlaceOfBirth");
  EXPECT_EQ(local_name("http://www.w3.org/2000/01/rdf-schema#label"), "label");
}

TEST(TurtleProperty, RoundTripRandomGraphs) {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Graph g = gen::graph(rng);
    std::string text = serialize_turtle(g);
    Graph back = parse_turtle(text);
    ASSERT_EQ(back.triples(), g.triples()) << text;
  }
}

TEST(Extraction, FencedOutputWithChatter) {
  Graph g = parse_turtle(kFirouzi);
  std::string text = "Here is the graph:\n```turtle\n" + serialize_turtle(g) +
                     "```\nLet me know if you need more.";
  Extraction ex = extract_valid_triples(text);
  EXPECT_EQ(ex.graph.triples(), g.triples());
  EXPECT_EQ(ex.skipped, 0u);
}

TEST(Extraction, InitialPrefixesResolveUndeclaredLabels) {
  std::string body = kFirouzi;
  body = body.substr(body.find("wd:Mohammad"));
  EXPECT_THROW(parse_turtle(body), UnknownPrefix);
  Extraction ex = extract_valid_triples(body, standard_prefixes());
  EXPECT_EQ(ex.graph.size(), 6u);
  EXPECT_EQ(ex.skipped, 0u);
  EXPECT_EQ(extract_valid_triples(body).skipped, 1u);
}

TEST(Extraction, SkipsOnlyTheBrokenStatement) {
  std::string text =
      "@prefix ex: <http://example.org/> .\n"
      "ex:a ex:p ex:b .\n"
      "ex:c ex:p \"unterminated .\n"
      "ex:d ex:p ex:e ; ex:q .\n"
      "zz:f ex:p ex:g .\n"
      "ex:h ex:p \"ok. fine\" .\n";
  Extraction ex = extract_valid_triples(text);
  EXPECT_EQ(ex.skipped, 3u);
  EXPECT_EQ(ex.graph.size(), 2u);
  EXPECT_TRUE(ex.graph.contains(make_triple(Term::iri("http://example.org/h"),
                                            Term::iri("http://example.org/p"),
                                            Term::literal("ok. fine"))));
}

TEST(Extraction, NeverThrowsOnGarbage) {
  for (const char *junk : {"", "....", "<<<>>>", "\"", "@prefix", "a a a .", "```", "x:y"}) {
    EXPECT_NO_THROW(extract_valid_triples(junk)) << junk;
  }
}

TEST(ExtractionProperty, SingleCorruptedStatement) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Graph g = gen::graph(rng);
    auto stmts = statements(g);
    if (stmts.empty()) continue;
    std::size_t bad = gen::uniform(rng, 0, static_cast<int>(stmts.size()) - 1);
    std::string text = prefix_block(g);
    Graph expected(g.prefixes());
    for (std::size_t k = 0; k < stmts.size(); ++k) {
      if (k == bad) {
        text += "!! " + stmts[k];
      } else {
        text += stmts[k];
        Graph part = parse_turtle(prefix_block(g) + stmts[k]);
        for (const auto &tr : part.triples()) expected.add(tr);
      }
    }
    Extraction ex = extract_valid_triples("```\n" + text + "```\n");
    ASSERT_EQ(ex.skipped, 1u) << text;
    ASSERT_EQ(ex.graph.triples(), expected.triples()) << text;
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

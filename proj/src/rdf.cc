#include "kgforge/rdf.h"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kgforge/error.h"

namespace kgforge::rdf {

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_high(char c) { return static_cast<unsigned char>(c) >= 0x80; }

// Characters allowed anywhere in a local name (besides interior '.').
bool is_name_char(char c) {
  return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || is_high(c);
}
bool is_name_start(char c) {
  return is_alpha(c) || is_digit(c) || c == '_' || is_high(c);
}
bool is_prefix_char(char c) {
  return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || is_high(c);
}

bool is_valid_prefix_label(std::string_view p) {
  if (p.empty()) return true;
  if (!is_alpha(p.front()) && !is_high(p.front())) return false;
  return std::all_of(p.begin(), p.end(), is_prefix_char);
}

bool is_iri_char(char c) {
  if (static_cast<unsigned char>(c) <= 0x20) return false;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}': case '|': case '^':
    case '`': case '\\':
      return false;
    default:
      return true;
  }
}

void append_utf8(std::string &out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// ---------------------------------------------------------------------------
// Parser

class TurtleReader {
 public:
  TurtleReader(std::string_view text, PrefixMap prefixes)
      : text_(text), graph_(std::move(prefixes)) {}

  // Strict mode: every statement must parse.
  void parse_all() {
    while (true) {
      skip_ws();
      if (at_end()) return;
      std::vector<Triple> pending;
      statement(pending);
      for (auto &t : pending) graph_.add(std::move(t));
    }
  }

  // Recovery mode: failing statements are skipped to the next terminator.
  std::size_t parse_recovering() {
    std::size_t skipped = 0;
    while (true) {
      skip_ws();
      if (at_end()) return skipped;
      std::size_t start = pos_;
      std::vector<Triple> pending;
      try {
        statement(pending);
        for (auto &t : pending) graph_.add(std::move(t));
      } catch (const std::exception &) {
        ++skipped;
        resync(start);
      }
    }
  }

  Graph take() { return std::move(graph_); }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  [[noreturn]] void fail(const std::string &message) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(line, col, message);
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Scans forward from `start` to just past the next '.' that terminates a
  // statement: outside strings and IRIs, and followed by whitespace, '#' or
  // end of input. Strings and IRIs cannot span lines in this grammar; a
  // string left open at the end of a line ends its statement at the last
  // terminator it swallowed, if any.
  void resync(std::size_t start) {
    std::size_t i = start;
    std::size_t string_dot = std::string_view::npos;
    enum { kNone, kString, kIri } state = kNone;
    auto terminator_at = [&](std::size_t k) {
      char next = k + 1 < text_.size() ? text_[k + 1] : ' ';
      return text_[k] == '.' && (next == ' ' || next == '\t' || next == '\n' ||
                                 next == '\r' || next == '#');
    };
    while (i < text_.size()) {
      char c = text_[i];
      if (state == kString) {
        if (c == '\\') {
          i += 2;
          continue;
        }
        if (terminator_at(i)) string_dot = i;
        if (c == '\n' && string_dot != std::string_view::npos) {
          pos_ = string_dot + 1;
          return;
        }
        if (c == '"' || c == '\n') {
          state = kNone;
          string_dot = std::string_view::npos;
        }
      } else if (state == kIri) {
        if (c == '>' || c == '\n' || c == ' ') state = kNone;
      } else if (c == '"') {
        state = kString;
      } else if (c == '<') {
        state = kIri;
      } else if (c == '#') {
        while (i < text_.size() && text_[i] != '\n') ++i;
        continue;
      } else if (terminator_at(i)) {
        pos_ = i + 1;
        return;
      }
      ++i;
    }
    pos_ = state == kString && string_dot != std::string_view::npos
               ? string_dot + 1
               : text_.size();
  }

  void expect(char c, const char *what) {
    skip_ws();
    if (peek() != c) fail(std::string("expected ") + what);
    ++pos_;
  }

  void statement(std::vector<Triple> &out) {
    if (peek() == '@') {
      prefix_directive();
      return;
    }
    Term subject = read_subject();
    predicate_object_list(subject, out);
    expect('.', "'.' at end of statement");
  }

  void prefix_directive() {
    static constexpr std::string_view kPrefix = "@prefix";
    if (text_.substr(pos_, kPrefix.size()) != kPrefix) {
      fail("unknown directive");
    }
    pos_ += kPrefix.size();
    if (!(peek() == ' ' || peek() == '\t')) fail("expected whitespace");
    skip_ws();
    std::size_t begin = pos_;
    while (!at_end() && peek() != ':' && is_prefix_char(peek())) ++pos_;
    if (peek() != ':') fail("expected prefix label followed by ':'");
    std::string label(text_.substr(begin, pos_ - begin));
    if (!is_valid_prefix_label(label)) fail("invalid prefix label");
    ++pos_;
    skip_ws();
    if (peek() != '<') fail("expected <namespace IRI>");
    std::string ns = read_iriref();
    expect('.', "'.' after @prefix");
    graph_.set_prefix(std::move(label), std::move(ns));
  }

  std::string read_iriref() {
    ++pos_;  // '<'
    std::size_t begin = pos_;
    while (!at_end() && peek() != '>') {
      if (!is_iri_char(peek())) fail("invalid character in IRI");
      ++pos_;
    }
    if (at_end()) fail("unterminated IRI");
    std::string iri(text_.substr(begin, pos_ - begin));
    ++pos_;
    if (iri.empty()) fail("empty IRI");
    return iri;
  }

  // Reads prefix:local at pos_ and expands it.
  std::string read_prefixed_name() {
    std::size_t begin = pos_;
    while (!at_end() && peek() != ':' && is_prefix_char(peek())) ++pos_;
    if (peek() != ':') fail("expected prefixed name");
    std::string label(text_.substr(begin, pos_ - begin));
    if (!is_valid_prefix_label(label)) fail("invalid prefix label");
    ++pos_;
    std::size_t local_begin = pos_;
    if (!at_end() && is_name_start(peek())) {
      ++pos_;
      while (!at_end()) {
        char c = peek();
        if (is_name_char(c)) {
          ++pos_;
        } else if (c == '.' && is_name_char(peek(1))) {
          ++pos_;
        } else {
          break;
        }
      }
    }
    std::string_view local = text_.substr(local_begin, pos_ - local_begin);
    auto it = graph_.prefixes().find(label);
    if (it == graph_.prefixes().end()) throw UnknownPrefix(label);
    return it->second + std::string(local);
  }

  Term read_iri_term() {
    if (peek() == '<') return Term::iri(read_iriref());
    return Term::iri(read_prefixed_name());
  }

  Term read_blank() {
    pos_ += 2;  // "_:"
    std::size_t begin = pos_;
    if (at_end() || !is_name_start(peek())) fail("invalid blank node label");
    while (!at_end()) {
      char c = peek();
      if (is_name_char(c) || (c == '.' && is_name_char(peek(1)))) {
        ++pos_;
      } else {
        break;
      }
    }
    return Term::blank(std::string(text_.substr(begin, pos_ - begin)));
  }

  bool at_keyword_a() const {
    if (peek() != 'a') return false;
    char next = peek(1);
    return next == ' ' || next == '\t' || next == '\n' || next == '\r' ||
           next == '<' || next == '"' || next == '\0' || next == '#';
  }

  Term read_subject() {
    skip_ws();
    char c = peek();
    if (c == '<') return read_iri_term();
    if (c == '_' && peek(1) == ':') return read_blank();
    if (c == '"') fail("literal in subject position");
    if (c == ':' || is_alpha(c) || is_high(c)) return read_iri_term();
    fail("expected subject");
  }

  Term read_verb() {
    skip_ws();
    if (at_keyword_a()) {
      ++pos_;
      return Term::iri(kRdfType);
    }
    char c = peek();
    if (c == '<' || c == ':' || is_alpha(c) || is_high(c)) {
      return read_iri_term();
    }
    fail("expected predicate");
  }

  Term read_object() {
    skip_ws();
    char c = peek();
    if (c == '"') return read_literal();
    if (c == '<') return read_iri_term();
    if (c == '_' && peek(1) == ':') return read_blank();
    if (c == ':' || is_alpha(c) || is_high(c)) {
      if (at_keyword_a()) fail("'a' is only valid as a predicate");
      return read_iri_term();
    }
    fail("expected object");
  }

  Term read_literal() {
    ++pos_;  // opening quote
    std::string lexical;
    while (true) {
      if (at_end() || peek() == '\n' || peek() == '\r') {
        fail("unterminated string literal");
      }
      char c = peek();
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        char e = peek();
        ++pos_;
        switch (e) {
          case 't': lexical += '\t'; break;
          case 'b': lexical += '\b'; break;
          case 'n': lexical += '\n'; break;
          case 'r': lexical += '\r'; break;
          case 'f': lexical += '\f'; break;
          case '"': lexical += '"'; break;
          case '\'': lexical += '\''; break;
          case '\\': lexical += '\\'; break;
          case 'u':
          case 'U': {
            std::size_t n = e == 'u' ? 4 : 8;
            if (pos_ + n > text_.size()) fail("truncated unicode escape");
            std::uint32_t cp = 0;
            for (std::size_t i = 0; i < n; ++i) {
              char h = text_[pos_ + i];
              cp <<= 4;
              if (is_digit(h)) cp |= h - '0';
              else if (h >= 'a' && h <= 'f') cp |= h - 'a' + 10;
              else if (h >= 'A' && h <= 'F') cp |= h - 'A' + 10;
              else fail("invalid unicode escape");
            }
            if (cp > 0x10FFFF) fail("code point out of range");
            pos_ += n;
            append_utf8(lexical, cp);
            break;
          }
          default:
            fail("invalid escape sequence");
        }
        continue;
      }
      lexical += c;
      ++pos_;
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t begin = pos_;
      while (!at_end() && is_alpha(peek())) ++pos_;
      if (pos_ == begin) fail("empty language tag");
      while (peek() == '-' && (is_alpha(peek(1)) || is_digit(peek(1)))) {
        ++pos_;
        while (!at_end() && (is_alpha(peek()) || is_digit(peek()))) ++pos_;
      }
      return Term::lang(std::move(lexical),
                        std::string(text_.substr(begin, pos_ - begin)));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      char c = peek();
      if (!(c == '<' || c == ':' || is_alpha(c) || is_high(c))) {
        fail("expected datatype IRI");
      }
      Term dt = read_iri_term();
      return Term::typed(std::move(lexical), dt.as_iri().value);
    }
    return Term::literal(std::move(lexical));
  }

  void predicate_object_list(const Term &subject, std::vector<Triple> &out) {
    while (true) {
      Term verb = read_verb();
      while (true) {
        Term object = read_object();
        out.push_back(make_triple(subject, verb, std::move(object)));
        skip_ws();
        if (peek() != ',') break;
        ++pos_;
      }
      skip_ws();
      if (peek() != ';') return;
      // One or more ';', possibly trailing before '.'.
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      if (peek() == '.') return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Graph graph_;
};

bool is_fence_line(std::string_view line) {
  std::size_t i = line.find_first_not_of(" \t");
  return i != std::string_view::npos && line.substr(i, 3) == "```";
}

// Returns the content between ``` fences, or the text unchanged if no fence
// line exists.
std::string strip_fences(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  bool any = std::any_of(lines.begin(), lines.end(), is_fence_line);
  if (!any) return std::string(text);
  std::string out;
  bool inside = false;
  for (auto line : lines) {
    if (is_fence_line(line)) {
      inside = !inside;
      continue;
    }
    if (inside) {
      out.append(line);
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serializer

std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          static const char *kHex = "0123456789ABCDEF";
          out += "\\u00";
          out += kHex[(static_cast<unsigned char>(c) >> 4) & 0xF];
          out += kHex[static_cast<unsigned char>(c) & 0xF];
        } else {
          out += c;
        }
    }
  }
  return out;
}

class TurtleWriter {
 public:
  TurtleWriter(const PrefixMap &prefixes, const SerializeOptions &options)
      : prefixes_(prefixes), options_(options) {}

  std::string iri(const std::string &value) const {
    // Longest namespace first so that nested namespaces pick the tightest.
    const std::pair<const std::string, std::string> *best = nullptr;
    for (const auto &entry : prefixes_) {
      const std::string &ns = entry.second;
      if (ns.empty() || value.size() < ns.size()) continue;
      if (value.compare(0, ns.size(), ns) != 0) continue;
      if (!is_valid_local_name(std::string_view(value).substr(ns.size()))) {
        continue;
      }
      if (!best || ns.size() > best->second.size() ||
          (ns.size() == best->second.size() && entry.first < best->first)) {
        best = &entry;
      }
    }
    if (best) return best->first + ":" + value.substr(best->second.size());
    if (!options_.allow_full_iris) throw MissingPrefix(value);
    return "<" + value + ">";
  }

  std::string term(const Term &t) const {
    if (t.is_iri()) return iri(t.as_iri().value);
    if (t.is_blank()) return "_:" + t.as_blank().label;
    const Literal &lit = t.as_literal();
    std::string out = "\"" + escape_string(lit.lexical) + "\"";
    if (lit.language) out += "@" + *lit.language;
    if (lit.datatype) out += "^^" + iri(*lit.datatype);
    return out;
  }

 private:
  const PrefixMap &prefixes_;
  const SerializeOptions &options_;
};

std::string subject_key(const Term &t) {
  return t.is_blank() ? "_:" + t.as_blank().label : t.as_iri().value;
}

}  // namespace

// ---------------------------------------------------------------------------

Term Term::iri(std::string value) {
  if (value.empty() || has_whitespace(value)) {
    throw std::invalid_argument("invalid IRI '" + value + "'");
  }
  return Term(Iri{std::move(value)});
}

Term Term::literal(std::string lexical) {
  return Term(Literal{std::move(lexical), std::nullopt, std::nullopt});
}

Term Term::typed(std::string lexical, std::string datatype) {
  if (datatype.empty() || has_whitespace(datatype)) {
    throw std::invalid_argument("invalid datatype IRI '" + datatype + "'");
  }
  return Term(Literal{std::move(lexical), std::move(datatype), std::nullopt});
}

Term Term::lang(std::string lexical, std::string language) {
  if (language.empty()) throw std::invalid_argument("empty language tag");
  return Term(Literal{std::move(lexical), std::nullopt, std::move(language)});
}

Term Term::blank(std::string label) {
  if (label.empty()) throw std::invalid_argument("empty blank node label");
  return Term(Blank{std::move(label)});
}

const std::string &Term::text() const {
  if (is_iri()) return as_iri().value;
  if (is_blank()) return as_blank().label;
  return as_literal().lexical;
}

std::string Term::debug_string() const {
  if (is_iri()) return "<" + as_iri().value + ">";
  if (is_blank()) return "_:" + as_blank().label;
  const Literal &lit = as_literal();
  std::string out = "\"" + escape_string(lit.lexical) + "\"";
  if (lit.language) out += "@" + *lit.language;
  if (lit.datatype) out += "^^<" + *lit.datatype + ">";
  return out;
}

Triple make_triple(Term subject, Term predicate, Term object) {
  if (subject.is_literal()) {
    throw std::invalid_argument("literal in subject position");
  }
  if (!predicate.is_iri()) {
    throw std::invalid_argument("predicate must be an IRI");
  }
  return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

bool Graph::add(Triple t) { return triples_.insert(std::move(t)).second; }

const PrefixMap &standard_prefixes() {
  static const PrefixMap kPrefixes = {
      {"rdf", std::string(ns::kRdf)},       {"xsd", std::string(ns::kXsd)},
      {"rdfs", std::string(ns::kRdfs)},     {"owl", std::string(ns::kOwl)},
      {"wikibase", std::string(ns::kWikibase)},
      {"schema", std::string(ns::kSchema)}, {"wd", std::string(ns::kWd)},
      {"wdt", std::string(ns::kWdt)},
  };
  return kPrefixes;
}

Graph parse_turtle(std::string_view text) {
  TurtleReader reader(text, {});
  reader.parse_all();
  return reader.take();
}

Extraction extract_valid_triples(std::string_view text,
                                 const PrefixMap &initial) {
  std::string body = strip_fences(text);
  TurtleReader reader(body, initial);
  Extraction result;
  result.skipped = reader.parse_recovering();
  result.graph = reader.take();
  return result;
}

bool is_valid_local_name(std::string_view local) {
  if (local.empty()) return true;
  if (!is_name_start(local.front())) return false;
  if (local.back() == '.') return false;
  for (std::size_t i = 0; i < local.size(); ++i) {
    char c = local[i];
    if (is_name_char(c)) continue;
    if (c == '.' && i + 1 < local.size() && is_name_char(local[i + 1])) {
      continue;
    }
    return false;
  }
  return true;
}

std::string_view local_name(std::string_view iri) {
  std::size_t cut = iri.find_last_of("/#");
  return cut == std::string_view::npos ? iri : iri.substr(cut + 1);
}

std::string serialize_turtle(const Graph &graph,
                             const SerializeOptions &options) {
  TurtleWriter writer(graph.prefixes(), options);
  std::string out;
  for (const auto &[label, ns] : graph.prefixes()) {
    out += "@prefix " + label + ": <" + ns + "> .\n";
  }

  // subject key -> predicate IRI -> objects
  struct Block {
    const Term *subject = nullptr;
    std::map<std::string, std::vector<const Term *>> predicates;
  };
  std::map<std::string, Block> blocks;
  for (const Triple &t : graph.triples()) {
    Block &b = blocks[subject_key(t.subject)];
    b.subject = &t.subject;
    b.predicates[t.predicate.as_iri().value].push_back(&t.object);
  }

  for (auto &[key, block] : blocks) {
    out += "\n";
    out += writer.term(*block.subject);
    std::vector<std::string> order;
    if (block.predicates.count(kRdfType)) order.push_back(kRdfType);
    for (const auto &[p, objects] : block.predicates) {
      if (p != kRdfType) order.push_back(p);
    }
    bool first = true;
    for (const std::string &p : order) {
      auto &objects = block.predicates[p];
      std::sort(objects.begin(), objects.end(),
                [](const Term *a, const Term *b) { return *a < *b; });
      out += first ? " " : " ;\n    ";
      first = false;
      out += p == kRdfType ? "a" : writer.iri(p);
      for (std::size_t i = 0; i < objects.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += writer.term(*objects[i]);
      }
    }
    out += " .\n";
  }
  return out;
}

}  // namespace kgforge::rdf

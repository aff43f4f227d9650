#include "kgforge/convert.h"

#include <cctype>

#include "json.hpp"
#include "kgforge/corpus.h"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/text.h"

namespace kgforge::convert {

using json = nlohmann::json;

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view s) : s_(s) {}

  json parse() {
    json v = value();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string &what) {
    throw SchemaError(0, "list literal at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  json value() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '[' || c == '(') return list(c == '[' ? ']' : ')');
    if (c == '\'' || c == '"') return string(c);
    fail(std::string("unexpected '") + c + "'");
  }

  json list(char close) {
    ++pos_;
    json out = json::array();
    skip();
    if (pos_ < s_.size() && s_[pos_] == close) {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(value());
      skip();
      if (pos_ >= s_.size()) fail("unterminated list");
      if (s_[pos_] == ',') {
        ++pos_;
        skip();
        if (pos_ < s_.size() && s_[pos_] == close) {
          ++pos_;
          return out;
        }
        continue;
      }
      if (s_[pos_] == close) {
        ++pos_;
        return out;
      }
      fail("expected ',' or closing bracket");
    }
  }

  json string(char quote) {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char c = s_[pos_++];
      if (c == '\\' && pos_ < s_.size()) {
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: out += e;
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string label_words(const std::string &label) {
  std::string out;
  for (char c : label) out += (c == '-' || c == '_') ? ' ' : c;
  return text::normalize_space(out);
}

}  // namespace

std::vector<GoldTriple> parse_triple_list(std::string_view literal) {
  json v = LiteralParser(literal).parse();
  if (!v.is_array()) throw SchemaError(0, "expected a list of triples");
  std::vector<GoldTriple> out;
  for (const auto &t : v) {
    if (!t.is_array() || t.size() != 3) throw SchemaError(0, "expected 3-element triples");
    out.push_back({t[0].get<std::string>(), t[1].get<std::string>(),
                   t[2].get<std::string>()});
  }
  return out;
}

std::vector<Document> from_edc(const std::filesystem::path &text_path,
                               const std::filesystem::path *triples_path,
                               const std::string &id_prefix) {
  std::vector<std::string> texts;
  for (const auto &line : text::split_lines(fs::read_file(text_path))) {
    if (!text::trim(line).empty()) texts.push_back(text::trim(line));
  }
  std::vector<std::string> triple_lines;
  if (triples_path) {
    for (const auto &line : text::split_lines(fs::read_file(*triples_path))) {
      if (!text::trim(line).empty()) triple_lines.push_back(line);
    }
    if (triple_lines.size() != texts.size()) {
      throw SchemaError(0, "text has " + std::to_string(texts.size()) +
                               " lines but triples has " +
                               std::to_string(triple_lines.size()));
    }
  }
  std::vector<Document> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Document d{id_prefix + std::to_string(i + 1), texts[i], std::nullopt};
    if (triples_path) {
      try {
        d.gold = parse_triple_list(triple_lines[i]);
      } catch (const SchemaError &e) {
        throw SchemaError(i + 1, e.what());
      }
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Document> from_scierc(const std::filesystem::path &path) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  for (const auto &line : text::split_lines(fs::read_file(path))) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      std::vector<std::string> tokens;
      for (const auto &sentence : j.at("sentences")) {
        for (const auto &tok : sentence) tokens.push_back(tok.get<std::string>());
      }
      auto span = [&](long a, long b) {
        if (a < 0 || b < a || static_cast<std::size_t>(b) >= tokens.size()) {
          throw SchemaError(line_no, "span out of range");
        }
        std::string out;
        for (long k = a; k <= b; ++k) {
          if (k > a) out += ' ';
          out += tokens[k];
        }
        return out;
      };
      Document d;
      d.id = j.at("doc_key").get<std::string>();
      std::string body;
      for (const auto &t : tokens) body += (body.empty() ? "" : " ") + t;
      d.text = body;
      std::vector<GoldTriple> gold;
      if (j.contains("relations")) {
        for (const auto &sentence : j["relations"]) {
          for (const auto &r : sentence) {
            gold.push_back({span(r.at(0).get<long>(), r.at(1).get<long>()),
                            label_words(r.at(4).get<std::string>()),
                            span(r.at(2).get<long>(), r.at(3).get<long>())});
          }
        }
      }
      d.gold = std::move(gold);
      docs.push_back(std::move(d));
    } catch (const json::exception &e) {
      throw SchemaError(line_no, e.what());
    }
  }
  return docs;
}

void write_corpus(const std::filesystem::path &path,
                  const std::vector<Document> &docs) {
  std::string out;
  for (const auto &d : docs) out += corpus::format_document(d) + "\n";
  fs::write_atomic(path, out);
}

void write_gold(const std::filesystem::path &path,
                const std::vector<Document> &docs) {
  std::string out;
  for (const auto &d : docs) {
    if (!d.gold) continue;
    json triples = json::array();
    for (const auto &t : *d.gold) triples.push_back({t.subject, t.predicate, t.object});
    out += json{{"doc_id", d.id}, {"triples", triples}}.dump() + "\n";
  }
  fs::write_atomic(path, out);
}

}  // namespace kgforge::convert

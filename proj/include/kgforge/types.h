#pragma once

// Records passed between pipeline stages.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kgforge {

struct GoldTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  bool operator==(const GoldTriple &) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<std::vector<GoldTriple>> gold;
};

struct CompetencyQuestion {
  std::size_t index = 0;  // 1-based
  std::string text;
  bool operator==(const CompetencyQuestion &) const = default;
};

struct QAPair {
  CompetencyQuestion question;
  std::string answer;
  bool answered = false;
};

struct ExtractedRelation {
  std::string name;           // lowercase relation phrase
  std::string usage_comment;
  std::string source_doc;
  std::string raw_line;       // the response line it was parsed from
  bool operator==(const ExtractedRelation &) const = default;
};

}  // namespace kgforge

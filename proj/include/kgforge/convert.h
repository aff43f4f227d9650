#pragma once

// Thin adapters from benchmark distributions to the corpus format.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/types.h"

namespace kgforge::convert {

// Python list literal of string triples, e.g.
// [['Mohammad Firouzi', 'place of birth', 'Tehran'], ...]. Throws
// SchemaError(0, ...) on malformed input.
std::vector<GoldTriple> parse_triple_list(std::string_view literal);

// One document per non-empty text line; the triples file, when given, holds
// one list literal per line in the same order. Ids are <prefix><n>, 1-based.
std::vector<Document> from_edc(const std::filesystem::path &text_path,
                               const std::filesystem::path *triples_path,
                               const std::string &id_prefix);

// SciERC JSON lines: {"doc_key", "sentences": [[tok...]...],
// "relations": [[[s0, s1, o0, o1, label]...]...]} with document-level token
// offsets. Labels become lowercase words ("USED-FOR" -> "used for").
std::vector<Document> from_scierc(const std::filesystem::path &path);

void write_corpus(const std::filesystem::path &path,
                  const std::vector<Document> &docs);
// {"doc_id", "triples"} lines for documents that carry gold.
void write_gold(const std::filesystem::path &path,
                const std::vector<Document> &docs);

}  // namespace kgforge::convert

#pragma once

// Line-delimited corpora: {"id", "text", "gold"?} and gold files
// {"doc_id", "triples"}.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kgforge/types.h"

namespace kgforge::corpus {

// Documents in file order. Blank lines are ignored. Throws IoError and
// SchemaError(line number).
std::vector<Document> load_corpus(const std::filesystem::path &path);

// Accepts gold records {"doc_id", "triples": [[s, p, o], ...]} or corpus
// records carrying "gold". Throws IoError, SchemaError.
std::map<std::string, std::vector<GoldTriple>> load_gold(
    const std::filesystem::path &path);

std::string format_document(const Document &doc);

}  // namespace kgforge::corpus

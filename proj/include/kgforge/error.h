#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- rdf ------------------------------------------------------------------

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string &message)
      : Error("syntax error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(message) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string &message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class UnknownPrefix : public Error {
 public:
  explicit UnknownPrefix(const std::string &prefix)
      : Error("unknown prefix '" + prefix + ":'"), prefix_(prefix) {}
  const std::string &prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

class MissingPrefix : public Error {
 public:
  explicit MissingPrefix(const std::string &ns)
      : Error("no prefix declared for namespace of <" + ns + ">"), ns_(ns) {}
  const std::string &ns() const { return ns_; }

 private:
  std::string ns_;
};

// ---- files and schemas ----------------------------------------------------

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t record, const std::string &detail)
      : Error("schema error in record " + std::to_string(record) + ": " +
              detail),
        record_(record) {}
  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

class DuplicatePid : public Error {
 public:
  explicit DuplicatePid(const std::string &pid)
      : Error("duplicate property id " + pid), pid_(pid) {}
  const std::string &pid() const { return pid_; }

 private:
  std::string pid_;
};

class EmptyResult : public Error {
 public:
  using Error::Error;
};

// ---- network --------------------------------------------------------------

class NetworkError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  QueryError(int status, const std::string &excerpt)
      : Error("query failed with HTTP " + std::to_string(status) + ": " +
              excerpt),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// ---- llm ------------------------------------------------------------------

class MissingSlot : public Error {
 public:
  explicit MissingSlot(const std::string &name)
      : Error("missing binding for slot {" + name + "}") {}
};

class UnknownSlot : public Error {
 public:
  explicit UnknownSlot(const std::string &name)
      : Error("binding for unknown slot {" + name + "}") {}
};

class ProviderError : public Error {
 public:
  ProviderError(int status, const std::string &message)
      : Error("provider error (" + std::to_string(status) + "): " + message),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class Timeout : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class CacheCorrupt : public Error {
 public:
  explicit CacheCorrupt(const std::string &path)
      : Error("corrupt cache entry " + path), path_(path) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

// ---- embeddings -----------------------------------------------------------

class EmptyText : public Error {
 public:
  explicit EmptyText(std::size_t index)
      : Error("empty text at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " +
              std::to_string(b)) {}
};

class EmptyIndex : public Error {
 public:
  EmptyIndex() : Error("embedding index is empty") {}
};

// ---- pipeline stages ------------------------------------------------------

// LLM output that could not be interpreted. Carries the raw response.
class ParseFailure : public Error {
 public:
  ParseFailure(const std::string &what, std::string raw)
      : Error(what), raw_(std::move(raw)) {}
  const std::string &raw() const { return raw_; }

 private:
  std::string raw_;
};

class EmptyCatalog : public Error {
 public:
  EmptyCatalog() : Error("catalog is empty") {}
};

class ModeMismatch : public Error {
 public:
  using Error::Error;
};

class MissingGold : public Error {
 public:
  explicit MissingGold(const std::string &doc)
      : Error("no gold entry for document " + doc) {}
};

class MissingKg : public Error {
 public:
  explicit MissingKg(std::vector<std::string> docs)
      : Error("no kg.ttl for: " + join(docs)), docs_(std::move(docs)) {}
  const std::vector<std::string> &docs() const { return docs_; }

 private:
  static std::string join(const std::vector<std::string> &docs) {
    std::string out;
    for (const auto &d : docs) out += (out.empty() ? "" : ", ") + d;
    return out;
  }
  std::vector<std::string> docs_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgforge

#pragma once

// Sentence vectors for property usage texts and exact top-1 retrieval.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kgforge/http.h"

namespace kgforge::embedding {

// Unit-length vector of 32-bit floats.
class Vector {
 public:
  Vector() = default;
  // Scales to unit length; an all-zero input stays zero.
  static Vector normalized(std::vector<float> components);
  // Takes components as-is (used when loading a persisted index).
  static Vector raw(std::vector<float> components);

  std::size_t dimension() const { return components_.size(); }
  const std::vector<float> &components() const { return components_; }
  double norm() const;

  bool operator==(const Vector &) const = default;

 private:
  explicit Vector(std::vector<float> c) : components_(std::move(c)) {}
  std::vector<float> components_;
};

// Dot product of unit vectors. Throws DimensionMismatch.
double cosine(const Vector &u, const Vector &v);

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Throws EmptyText for a blank input and ProviderError on backend failure.
  virtual std::vector<Vector> embed(const std::vector<std::string> &texts) = 0;
  // Identifies the vector space; persisted indexes built under a different
  // fingerprint are rebuilt.
  virtual std::string fingerprint() const = 0;
};

// Hashed character-trigram term frequencies (FNV-1a into 256 buckets) over
// the lowercased, whitespace-collapsed text padded with one space each side.
class FallbackEmbedder : public Embedder {
 public:
  static constexpr std::size_t kDimension = 256;
  std::vector<Vector> embed(const std::vector<std::string> &texts) override;
  std::string fingerprint() const override { return "fallback-trigram-256"; }
};

struct HttpEmbedderOptions {
  std::string endpoint;
  std::string model;
  std::string api_key;
  http::RetryPolicy retry;
  std::chrono::milliseconds timeout{60000};
  std::size_t batch_size = 64;
};

// OpenAI-style embeddings endpoint: {"model", "input": [...]} ->
// {"data": [{"embedding": [...], "index": i}, ...]}.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(HttpEmbedderOptions options);
  std::vector<Vector> embed(const std::vector<std::string> &texts) override;
  std::string fingerprint() const override { return "live:" + options_.model; }

 private:
  HttpEmbedderOptions options_;
};

struct Record {
  std::string id;
  std::string text;
  Vector vector;
};

class EmbeddingIndex {
 public:
  EmbeddingIndex() = default;

  // Throws DimensionMismatch on mixed dimensions and Error on duplicate ids.
  static EmbeddingIndex build(std::vector<Record> records);
  // Embeds `items` (id, text) with `embedder`.
  static EmbeddingIndex build(
      const std::vector<std::pair<std::string, std::string>> &items,
      Embedder &embedder);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Record> &records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const Record *find(const std::string &id) const;

  // Binary sidecar: magic, version, dimension, fingerprint, records.
  void save(const std::filesystem::path &path,
            const std::string &fingerprint) const;
  // Returns false if the file is missing, malformed or has a different
  // fingerprint.
  static bool load(const std::filesystem::path &path,
                   const std::string &fingerprint, EmbeddingIndex &out);

 private:
  std::size_t dimension_ = 0;
  std::vector<Record> records_;
};

struct Hit {
  std::string id;
  double score = 0.0;
};

// Highest-cosine record; exact ties go to the lexicographically smallest id.
// Throws EmptyIndex, DimensionMismatch.
Hit top1(const Vector &query, const EmbeddingIndex &index);

}  // namespace kgforge::embedding

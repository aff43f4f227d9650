#include "kgforge/embedding.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>

#include "json.hpp"
#include "kgforge/error.h"
#include "kgforge/fs.h"

namespace kgforge::embedding {

using json = nlohmann::json;

namespace {

constexpr char kMagic[4] = {'K', 'G', 'E', 'I'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

bool blank(const std::string &s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

template <typename T>
void put(std::string &out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_string(std::string &out, const std::string &s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(const std::string &data) : data_(data) {}
  template <typename T>
  bool get(T &value) {
    if (pos_ + sizeof(T) > data_.size()) return false;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return true;
  }
  bool get_string(std::string &s) {
    std::uint32_t n = 0;
    if (!get(n) || pos_ + n > data_.size()) return false;
    s.assign(data_, pos_, n);
    pos_ += n;
    return true;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string &data_;
  std::size_t pos_ = 0;
};

}  // namespace

Vector Vector::normalized(std::vector<float> components) {
  double sum = 0.0;
  for (float c : components) sum += static_cast<double>(c) * c;
  if (sum > 0.0) {
    double inv = 1.0 / std::sqrt(sum);
    for (float &c : components) c = static_cast<float>(c * inv);
  }
  return Vector(std::move(components));
}

Vector Vector::raw(std::vector<float> components) {
  return Vector(std::move(components));
}

double Vector::norm() const {
  double sum = 0.0;
  for (float c : components_) sum += static_cast<double>(c) * c;
  return std::sqrt(sum);
}

double cosine(const Vector &u, const Vector &v) {
  if (u.dimension() != v.dimension()) {
    throw DimensionMismatch(u.dimension(), v.dimension());
  }
  double dot = 0.0;
  const auto &a = u.components();
  const auto &b = v.components();
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return std::clamp(dot, -1.0, 1.0);
}

std::vector<Vector> FallbackEmbedder::embed(
    const std::vector<std::string> &texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (blank(texts[i])) throw EmptyText(i);
    std::string norm = " ";
    bool space = false;
    for (unsigned char c : texts[i]) {
      if (std::isspace(c)) {
        space = true;
        continue;
      }
      if (space && norm.size() > 1) norm += ' ';
      space = false;
      norm += static_cast<char>(std::tolower(c));
    }
    norm += ' ';
    std::vector<float> counts(kDimension, 0.0f);
    for (std::size_t k = 0; k + 3 <= norm.size(); ++k) {
      counts[fnv1a(std::string_view(norm).substr(k, 3)) % kDimension] += 1.0f;
    }
    out.push_back(Vector::normalized(std::move(counts)));
  }
  return out;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderOptions options)
    : options_(std::move(options)) {}

std::vector<Vector> HttpEmbedder::embed(const std::vector<std::string> &texts) {
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (blank(texts[i])) throw EmptyText(i);
  }
  http::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace_back("Authorization", "Bearer " + options_.api_key);
  }
  std::vector<Vector> out;
  out.reserve(texts.size());
  std::size_t batch = std::max<std::size_t>(1, options_.batch_size);
  for (std::size_t begin = 0; begin < texts.size(); begin += batch) {
    std::size_t end = std::min(texts.size(), begin + batch);
    json body = {{"model", options_.model},
                 {"input", std::vector<std::string>(texts.begin() + begin,
                                                    texts.begin() + end)}};
    std::string payload = body.dump();
    http::Response r = http::with_retries(options_.retry, [&] {
      return http::post(options_.endpoint, payload, "application/json",
                        headers, {options_.timeout});
    });
    if (r.status != 200) {
      throw ProviderError(r.status, r.status ? r.body.substr(0, 300) : r.error);
    }
    try {
      json j = json::parse(r.body);
      const json &data = j.at("data");
      std::vector<Vector> part(end - begin);
      for (std::size_t k = 0; k < data.size(); ++k) {
        std::size_t idx = data[k].value("index", k);
        if (idx >= part.size()) throw ProviderError(200, "embedding index out of range");
        part[idx] = Vector::normalized(data[k].at("embedding").get<std::vector<float>>());
      }
      if (data.size() != part.size()) throw ProviderError(200, "embedding count mismatch");
      for (auto &v : part) out.push_back(std::move(v));
    } catch (const json::exception &e) {
      throw ProviderError(200, std::string("bad embedding response: ") + e.what());
    }
  }
  return out;
}

EmbeddingIndex EmbeddingIndex::build(std::vector<Record> records) {
  EmbeddingIndex index;
  std::set<std::string> ids;
  for (const auto &r : records) {
    if (!ids.insert(r.id).second) throw Error("duplicate index id " + r.id);
    if (index.dimension_ == 0) index.dimension_ = r.vector.dimension();
    if (r.vector.dimension() != index.dimension_) {
      throw DimensionMismatch(index.dimension_, r.vector.dimension());
    }
  }
  index.records_ = std::move(records);
  return index;
}

EmbeddingIndex EmbeddingIndex::build(
    const std::vector<std::pair<std::string, std::string>> &items,
    Embedder &embedder) {
  if (items.empty()) return EmbeddingIndex{};
  std::vector<std::string> texts;
  texts.reserve(items.size());
  for (const auto &[id, text] : items) texts.push_back(text);
  auto vectors = embedder.embed(texts);
  std::vector<Record> records;
  records.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    records.push_back({items[i].first, items[i].second, std::move(vectors[i])});
  }
  return build(std::move(records));
}

const Record *EmbeddingIndex::find(const std::string &id) const {
  for (const auto &r : records_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void EmbeddingIndex::save(const std::filesystem::path &path,
                          const std::string &fingerprint) const {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dimension_));
  put_string(out, fingerprint);
  put<std::uint64_t>(out, records_.size());
  for (const auto &r : records_) {
    put_string(out, r.id);
    put_string(out, r.text);
    for (float f : r.vector.components()) put<float>(out, f);
  }
  fs::write_atomic(path, out);
}

bool EmbeddingIndex::load(const std::filesystem::path &path,
                          const std::string &fingerprint, EmbeddingIndex &out) {
  auto data = fs::try_read_file(path);
  if (!data || data->size() < sizeof(kMagic) ||
      std::memcmp(data->data(), kMagic, sizeof(kMagic)) != 0) {
    return false;
  }
  std::string body = data->substr(sizeof(kMagic));
  Reader in(body);
  std::uint32_t version = 0, dimension = 0;
  std::string stored_fingerprint;
  std::uint64_t count = 0;
  if (!in.get(version) || version != kVersion || !in.get(dimension) ||
      !in.get_string(stored_fingerprint) || stored_fingerprint != fingerprint ||
      !in.get(count)) {
    return false;
  }
  std::vector<Record> records;
  for (std::uint64_t i = 0; i < count; ++i) {
    Record r;
    if (!in.get_string(r.id) || !in.get_string(r.text)) return false;
    std::vector<float> c(dimension);
    for (auto &f : c) {
      if (!in.get(f)) return false;
    }
    r.vector = Vector::raw(std::move(c));
    records.push_back(std::move(r));
  }
  if (!in.done()) return false;
  try {
    out = build(std::move(records));
  } catch (const Error &) {
    return false;
  }
  return true;
}

Hit top1(const Vector &query, const EmbeddingIndex &index) {
  if (index.empty()) throw EmptyIndex();
  if (query.dimension() != index.dimension()) {
    throw DimensionMismatch(query.dimension(), index.dimension());
  }
  const Record *best = nullptr;
  double best_score = 0.0;
  for (const auto &r : index.records()) {
    double s = cosine(query, r.vector);
    if (!best || s > best_score || (s == best_score && r.id < best->id)) {
      best = &r;
      best_score = s;
    }
  }
  return Hit{best->id, best_score};
}

}  // namespace kgforge::embedding

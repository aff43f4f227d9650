#pragma once

// Prompt templates, chat backends (mock and HTTP) and the caching gateway.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/http.h"

namespace kgforge::llm {

enum class TemplateName {
  kCqGeneration,
  kCqAnswering,
  kRelationExtraction,
  kOntologyMatching,
  kOntologyFormatting,
  kKgGeneration,
};

std::string_view to_string(TemplateName name);
std::optional<TemplateName> template_from_string(std::string_view name);

struct PromptTemplate {
  TemplateName name;
  std::string_view body;
  std::vector<std::string> slots;  // in order of first appearance
};

const PromptTemplate &get_template(TemplateName name);

using Bindings = std::map<std::string, std::string>;

// Substitutes every {slot} in one pass; bound values are never rescanned.
// Throws MissingSlot / UnknownSlot unless bindings cover exactly the slots.
std::string render(const PromptTemplate &tmpl, const Bindings &bindings);

// First 16 hex digits of SHA-256 over the canonical JSON of the bindings.
std::string bindings_hash(const Bindings &bindings);

struct Message {
  std::string role;
  std::string content;
  bool operator==(const Message &) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_output_tokens = 2048;

  // Provenance used by the mock backend; not part of the wire request or
  // the cache key.
  std::optional<TemplateName> template_name;
  Bindings bindings;
};

enum class FinishReason { kStop, kLength, kError };
std::string_view to_string(FinishReason r);
FinishReason finish_reason_from_string(std::string_view s);

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::kStop;
  std::chrono::milliseconds provider_latency{0};
};

struct RequestSettings {
  std::string model = "mock";
  double temperature = 0.0;
  int max_output_tokens = 2048;
};

// Renders `name` with `bindings` into a single-user-message request.
ChatRequest make_request(TemplateName name, const Bindings &bindings,
                         const RequestSettings &settings);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse send(const ChatRequest &request) = 0;
};

// Serves canned responses from `<dir>/*.jsonl`. Each line is an object with
// "template", "response" (or "response_file", relative to dir) and one of:
//   "bindings_hash": exact match on bindings_hash(request.bindings)
//   "when": {slot: substring, ...} every listed slot value contains the text
//   neither: default for the template
// Lookup order is exact hash, then "when" entries in file order, then the
// default. No match raises ProviderError(404).
class MockBackend : public ChatBackend {
 public:
  explicit MockBackend(const std::filesystem::path &dir);
  ChatResponse send(const ChatRequest &request) override;
  std::size_t fixture_count() const { return fixtures_.size(); }

 private:
  struct Fixture {
    TemplateName name;
    std::optional<std::string> hash;
    std::map<std::string, std::string> when;
    std::string response;
    FinishReason finish = FinishReason::kStop;
  };
  std::vector<Fixture> fixtures_;
};

struct HttpBackendOptions {
  std::string endpoint;     // full chat-completions URL
  std::string api_key;      // sent as a bearer token when non-empty
  http::RetryPolicy retry;
  std::chrono::milliseconds timeout{120000};
};

// De-facto chat-completions wire format.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ChatResponse send(const ChatRequest &request) override;

  static std::string encode_request(const ChatRequest &request);
  static ChatResponse decode_response(std::string_view body);

 private:
  HttpBackendOptions options_;
};

struct GatewayOptions {
  std::optional<std::filesystem::path> cache_dir;
  int max_in_flight = 4;
};

struct GatewayCounters {
  std::size_t backend_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t cache_corrupt = 0;
  std::size_t truncated = 0;
};

// Cache key: SHA-256 over model, temperature and the full messages.
std::string cache_key(const ChatRequest &request);
std::filesystem::path cache_path(const std::filesystem::path &dir,
                                 const std::string &key);
// Throws CacheCorrupt if the file is unreadable or malformed.
ChatResponse read_cache_entry(const std::filesystem::path &path,
                              const std::string &key);

class Gateway {
 public:
  // A null backend is allowed; complete() then raises ProviderError.
  Gateway(std::unique_ptr<ChatBackend> backend, GatewayOptions options = {});

  ChatResponse complete(const ChatRequest &request);
  // Uses the cache when a cache directory is configured, else complete().
  ChatResponse cached_complete(const ChatRequest &request);

  GatewayCounters counters() const;

 private:
  std::unique_ptr<ChatBackend> backend_;
  GatewayOptions options_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> cache_corrupt_{0};
  std::atomic<std::size_t> truncated_{0};
};

// Renders, sends through cached_complete and returns the reply text.
// A response with finish reason kError raises ProviderError.
std::string ask(Gateway &gateway, const RequestSettings &settings,
                TemplateName name, const Bindings &bindings);

}  // namespace kgforge::llm

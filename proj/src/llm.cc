#include "kgforge/llm.h"

#include <algorithm>
#include <array>
#include <iostream>

#include "json.hpp"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/hash.h"
#include "kgforge/prompts.h"

namespace kgforge::llm {

using json = nlohmann::json;

namespace {

constexpr std::array<TemplateName, 6> kAllTemplates = {
    TemplateName::kCqGeneration,       TemplateName::kCqAnswering,
    TemplateName::kRelationExtraction, TemplateName::kOntologyMatching,
    TemplateName::kOntologyFormatting, TemplateName::kKgGeneration,
};

std::string_view body_of(TemplateName name) {
  switch (name) {
    case TemplateName::kCqGeneration: return prompts::kCqGeneration;
    case TemplateName::kCqAnswering: return prompts::kCqAnswering;
    case TemplateName::kRelationExtraction: return prompts::kRelationExtraction;
    case TemplateName::kOntologyMatching: return prompts::kOntologyMatching;
    case TemplateName::kOntologyFormatting: return prompts::kOntologyFormatting;
    case TemplateName::kKgGeneration: return prompts::kKgGeneration;
  }
  return {};
}

// Finds the next {slot} at or after `from`. Returns npos when none.
std::size_t next_slot(std::string_view body, std::size_t from,
                      std::size_t &end) {
  while (true) {
    std::size_t open = body.find('{', from);
    if (open == std::string_view::npos) return open;
    std::size_t close = body.find_first_of("{}\n", open + 1);
    if (close != std::string_view::npos && body[close] == '}' &&
        close > open + 1) {
      end = close;
      return open;
    }
    from = open + 1;
  }
}

std::vector<std::string> scan_slots(std::string_view body) {
  std::vector<std::string> slots;
  std::size_t pos = 0, end = 0;
  while ((pos = next_slot(body, pos, end)) != std::string_view::npos) {
    std::string name(body.substr(pos + 1, end - pos - 1));
    if (std::find(slots.begin(), slots.end(), name) == slots.end()) {
      slots.push_back(std::move(name));
    }
    pos = end + 1;
  }
  return slots;
}

json messages_json(const std::vector<Message> &messages) {
  json arr = json::array();
  for (const auto &m : messages) {
    arr.push_back({{"role", m.role}, {"content", m.content}});
  }
  return arr;
}

}  // namespace

std::string_view to_string(TemplateName name) {
  switch (name) {
    case TemplateName::kCqGeneration: return "CqGeneration";
    case TemplateName::kCqAnswering: return "CqAnswering";
    case TemplateName::kRelationExtraction: return "RelationExtraction";
    case TemplateName::kOntologyMatching: return "OntologyMatching";
    case TemplateName::kOntologyFormatting: return "OntologyFormatting";
    case TemplateName::kKgGeneration: return "KgGeneration";
  }
  return "";
}

std::optional<TemplateName> template_from_string(std::string_view name) {
  for (TemplateName t : kAllTemplates) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

const PromptTemplate &get_template(TemplateName name) {
  static const std::array<PromptTemplate, 6> kTemplates = [] {
    std::array<PromptTemplate, 6> out{};
    for (std::size_t i = 0; i < kAllTemplates.size(); ++i) {
      std::string_view body = body_of(kAllTemplates[i]);
      out[i] = PromptTemplate{kAllTemplates[i], body, scan_slots(body)};
    }
    return out;
  }();
  return kTemplates[static_cast<std::size_t>(name)];
}

std::string render(const PromptTemplate &tmpl, const Bindings &bindings) {
  for (const auto &slot : tmpl.slots) {
    if (!bindings.count(slot)) throw MissingSlot(slot);
  }
  for (const auto &[name, value] : bindings) {
    if (std::find(tmpl.slots.begin(), tmpl.slots.end(), name) ==
        tmpl.slots.end()) {
      throw UnknownSlot(name);
    }
  }
  std::string out;
  std::size_t pos = 0, start = 0, end = 0;
  while ((start = next_slot(tmpl.body, pos, end)) != std::string_view::npos) {
    out.append(tmpl.body.substr(pos, start - pos));
    out += bindings.at(std::string(tmpl.body.substr(start + 1, end - start - 1)));
    pos = end + 1;
  }
  out.append(tmpl.body.substr(pos));
  return out;
}

std::string bindings_hash(const Bindings &bindings) {
  json j = bindings;  // std::map keeps keys sorted
  return sha256_hex(j.dump()).substr(0, 16);
}

std::string_view to_string(FinishReason r) {
  switch (r) {
    case FinishReason::kStop: return "stop";
    case FinishReason::kLength: return "length";
    case FinishReason::kError: return "error";
  }
  return "error";
}

FinishReason finish_reason_from_string(std::string_view s) {
  if (s == "stop") return FinishReason::kStop;
  if (s == "length") return FinishReason::kLength;
  return FinishReason::kError;
}

ChatRequest make_request(TemplateName name, const Bindings &bindings,
                         const RequestSettings &settings) {
  ChatRequest r;
  r.model = settings.model;
  r.temperature = settings.temperature;
  r.max_output_tokens = settings.max_output_tokens;
  r.messages.push_back({"user", render(get_template(name), bindings)});
  r.template_name = name;
  r.bindings = bindings;
  return r;
}

// ---------------------------------------------------------------------------
// MockBackend

MockBackend::MockBackend(const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto &entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list mock directory " + dir.string());
  std::sort(files.begin(), files.end());
  for (const auto &file : files) {
    std::string text = fs::read_file(file);
    std::size_t line_no = 0, start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error &) {
        throw SchemaError(line_no, "invalid JSON in " + file.string());
      }
      Fixture f;
      auto name = template_from_string(j.value("template", ""));
      if (!name) throw SchemaError(line_no, "unknown template in " + file.string());
      f.name = *name;
      if (j.contains("bindings_hash")) f.hash = j["bindings_hash"].get<std::string>();
      if (j.contains("when")) {
        f.when = j["when"].get<std::map<std::string, std::string>>();
      }
      if (j.contains("response")) {
        f.response = j["response"].get<std::string>();
      } else if (j.contains("response_file")) {
        f.response = fs::read_file(dir / j["response_file"].get<std::string>());
      } else {
        throw SchemaError(line_no, "fixture without response in " + file.string());
      }
      f.finish = finish_reason_from_string(j.value("finish_reason", "stop"));
      fixtures_.push_back(std::move(f));
    }
  }
}

ChatResponse MockBackend::send(const ChatRequest &request) {
  if (!request.template_name) {
    throw ProviderError(400, "mock backend needs a templated request");
  }
  const Fixture *hit = nullptr;
  std::string hash = bindings_hash(request.bindings);
  for (const auto &f : fixtures_) {
    if (f.name == *request.template_name && f.hash == hash) {
      hit = &f;
      break;
    }
  }
  if (!hit) {
    for (const auto &f : fixtures_) {
      if (f.name != *request.template_name || f.hash || f.when.empty()) continue;
      bool all = std::all_of(f.when.begin(), f.when.end(), [&](const auto &kv) {
        auto it = request.bindings.find(kv.first);
        return it != request.bindings.end() &&
               it->second.find(kv.second) != std::string::npos;
      });
      if (all) {
        hit = &f;
        break;
      }
    }
  }
  if (!hit) {
    for (const auto &f : fixtures_) {
      if (f.name == *request.template_name && !f.hash && f.when.empty()) {
        hit = &f;
        break;
      }
    }
  }
  if (!hit) {
    throw ProviderError(404, "no mock fixture for " +
                                 std::string(to_string(*request.template_name)) +
                                 " bindings " + hash);
  }
  return ChatResponse{hit->response, hit->finish, std::chrono::milliseconds(0)};
}

// ---------------------------------------------------------------------------
// HttpBackend

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)) {}

std::string HttpBackend::encode_request(const ChatRequest &request) {
  json j = {{"model", request.model},
            {"messages", messages_json(request.messages)},
            {"temperature", request.temperature},
            {"max_tokens", request.max_output_tokens}};
  return j.dump();
}

ChatResponse HttpBackend::decode_response(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error &e) {
    throw ProviderError(200, std::string("unparseable response: ") + e.what());
  }
  if (!j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty()) {
    throw ProviderError(200, "response has no choices");
  }
  const json &choice = j["choices"][0];
  ChatResponse r;
  if (choice.contains("message") && choice["message"].contains("content") &&
      choice["message"]["content"].is_string()) {
    r.content = choice["message"]["content"].get<std::string>();
  }
  std::string finish = choice.value("finish_reason", "stop");
  r.finish_reason = finish_reason_from_string(finish.empty() ? "stop" : finish);
  return r;
}

ChatResponse HttpBackend::send(const ChatRequest &request) {
  http::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace_back("Authorization", "Bearer " + options_.api_key);
  }
  std::string body = encode_request(request);
  auto started = std::chrono::steady_clock::now();
  int attempts = 0;
  http::Response r = http::with_retries(
      options_.retry,
      [&] {
        return http::post(options_.endpoint, body, "application/json",
                          headers, {options_.timeout});
      },
      &attempts);
  auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  if (http::is_transient(r)) {
    if (r.timed_out) throw Timeout("chat request timed out");
    throw BudgetExhausted("chat request failed after " +
                          std::to_string(attempts) + " attempts (" +
                          (r.status ? "HTTP " + std::to_string(r.status)
                                    : r.error) +
                          ")");
  }
  if (r.status != 200) throw ProviderError(r.status, r.body.substr(0, 300));
  ChatResponse out = decode_response(r.body);
  out.provider_latency = latency;
  return out;
}

// ---------------------------------------------------------------------------
// Gateway

std::string cache_key(const ChatRequest &request) {
  json j = {{"model", request.model},
            {"temperature", request.temperature},
            {"messages", messages_json(request.messages)}};
  return sha256_hex(j.dump());
}

std::filesystem::path cache_path(const std::filesystem::path &dir,
                                 const std::string &key) {
  return dir / key.substr(0, 2) / (key + ".resp");
}

ChatResponse read_cache_entry(const std::filesystem::path &path,
                              const std::string &key) {
  auto text = fs::try_read_file(path);
  if (!text) throw CacheCorrupt(path.string());
  try {
    json j = json::parse(*text);
    if (j.at("key").get<std::string>() != key) throw CacheCorrupt(path.string());
    ChatResponse r;
    r.content = j.at("content").get<std::string>();
    r.finish_reason = finish_reason_from_string(j.at("finish_reason").get<std::string>());
    r.provider_latency = std::chrono::milliseconds(j.at("latency_ms").get<long>());
    return r;
  } catch (const json::exception &) {
    throw CacheCorrupt(path.string());
  }
}

Gateway::Gateway(std::unique_ptr<ChatBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {}

ChatResponse Gateway::complete(const ChatRequest &request) {
  if (!backend_) throw ProviderError(0, "no chat backend configured");
  if (request.messages.empty()) throw ProviderError(0, "request has no messages");
  if (request.temperature < 0) throw ProviderError(0, "negative temperature");
  in_flight_.acquire();
  ++backend_calls_;
  ChatResponse r;
  try {
    r = backend_->send(request);
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();
  if (r.finish_reason == FinishReason::kLength) ++truncated_;
  return r;
}

ChatResponse Gateway::cached_complete(const ChatRequest &request) {
  if (!options_.cache_dir) return complete(request);
  std::string key = cache_key(request);
  auto path = cache_path(*options_.cache_dir, key);
  if (std::filesystem::exists(path)) {
    try {
      ChatResponse r = read_cache_entry(path, key);
      ++cache_hits_;
      return r;
    } catch (const CacheCorrupt &e) {
      ++cache_corrupt_;
      std::cerr << "warning: " << e.what() << ", recomputing\n";
    }
  }
  ChatResponse r = complete(request);
  if (r.finish_reason != FinishReason::kError) {
    json j = {{"key", key},
              {"content", r.content},
              {"finish_reason", std::string(to_string(r.finish_reason))},
              {"latency_ms", r.provider_latency.count()}};
    fs::write_atomic(path, j.dump());
  }
  return r;
}

GatewayCounters Gateway::counters() const {
  return {backend_calls_.load(), cache_hits_.load(), cache_corrupt_.load(),
          truncated_.load()};
}

std::string ask(Gateway &gateway, const RequestSettings &settings,
                TemplateName name, const Bindings &bindings) {
  ChatResponse r = gateway.cached_complete(make_request(name, bindings, settings));
  if (r.finish_reason == FinishReason::kError) {
    throw ProviderError(0, "backend reported an error finish");
  }
  return r.content;
}

}  // namespace kgforge::llm

#pragma once

// Minimal blocking HTTP client shared by the catalog fetcher, the chat
// backend and the embedding backend.

#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace kgforge::http {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};

// Throws kgforge::Error on a URL without scheme or host.
Url split_url(const std::string &url);

struct Response {
  int status = 0;      // 0 when the transport failed
  std::string body;
  std::string error;   // transport error description
  bool timed_out = false;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

struct RequestOptions {
  std::chrono::milliseconds timeout{60000};
};

Response post(const std::string &url, const std::string &body,
              const std::string &content_type, const Headers &headers,
              const RequestOptions &options = {});

// Retryable statuses: transport failure, 408, 429 and 5xx.
bool is_transient(const Response &r);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_backoff{500};
};

// Calls `attempt` until it returns a non-transient response or the attempt
// budget runs out, sleeping base_backoff * 2^k between tries. Returns the
// last response.
Response with_retries(const RetryPolicy &policy,
                      const std::function<Response()> &attempt,
                      int *attempts_made = nullptr);

}  // namespace kgforge::http

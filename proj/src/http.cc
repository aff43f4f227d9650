#include "kgforge/http.h"

#include <thread>

#include "httplib.h"
#include "kgforge/error.h"

namespace kgforge::http {

Url split_url(const std::string &url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) {
    throw Error("URL without scheme: " + url);
  }
  auto path_begin = url.find('/', scheme_end + 3);
  Url out;
  if (path_begin == std::string::npos) {
    out.origin = url;
    out.path = "/";
  } else {
    out.origin = url.substr(0, path_begin);
    out.path = url.substr(path_begin);
  }
  if (out.origin.size() <= scheme_end + 3) throw Error("URL without host: " + url);
  return out;
}

Response post(const std::string &url, const std::string &body,
              const std::string &content_type, const Headers &headers,
              const RequestOptions &options) {
  Url u = split_url(url);
  httplib::Client client(u.origin);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      options.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers hs;
  for (const auto &[k, v] : headers) hs.emplace(k, v);

  Response out;
  auto result = client.Post(u.path, hs, body, content_type);
  if (!result) {
    out.error = httplib::to_string(result.error());
    out.timed_out = result.error() == httplib::Error::Read ||
                    result.error() == httplib::Error::ConnectionTimeout;
    return out;
  }
  out.status = result->status;
  out.body = result->body;
  return out;
}

bool is_transient(const Response &r) {
  return r.status == 0 || r.status == 408 || r.status == 429 ||
         r.status >= 500;
}

Response with_retries(const RetryPolicy &policy,
                      const std::function<Response()> &attempt,
                      int *attempts_made) {
  Response last;
  int made = 0;
  auto backoff = policy.base_backoff;
  for (int i = 0; i < std::max(1, policy.max_attempts); ++i) {
    if (i > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    last = attempt();
    ++made;
    if (!is_transient(last)) break;
  }
  if (attempts_made) *attempts_made = made;
  return last;
}

}  // namespace kgforge::http

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "json.hpp"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/llm.h"
#include "test_server.h"
#include "test_util.h"

using namespace kgforge;
using namespace kgforge::llm;
using json = nlohmann::json;

namespace {

void write_mock(const testutil::TempDir &dir, const std::vector<json> &lines) {
  std::string text;
  for (const auto &l : lines) text += l.dump() + "\n";
  fs::write_atomic(dir / "fixtures.jsonl", text);
}

ChatRequest answering(const std::string &doc, const std::string &query) {
  return make_request(TemplateName::kCqAnswering, {{"doc", doc}, {"query", query}}, {});
}

// Counts calls and how many overlap.
class SlowBackend : public ChatBackend {
 public:
  ChatResponse send(const ChatRequest &) override {
    int now = ++active_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --active_;
    ++calls_;
    return {"ok", FinishReason::kLength, {}};
  }
  std::atomic<int> active_{0}, peak_{0}, calls_{0};
};

}  // namespace

TEST(Templates, SlotsInOrder) {
  EXPECT_EQ(get_template(TemplateName::kCqGeneration).slots,
            std::vector<std::string>{"document to be processed"});
  EXPECT_EQ(get_template(TemplateName::kCqAnswering).slots,
            (std::vector<std::string>{"doc", "query"}));
  EXPECT_EQ(get_template(TemplateName::kRelationExtraction).slots,
            (std::vector<std::string>{"document to be processed", "CQs"}));
  EXPECT_EQ(get_template(TemplateName::kOntologyMatching).slots,
            (std::vector<std::string>{"p1", "p2"}));
  EXPECT_EQ(get_template(TemplateName::kOntologyFormatting).slots,
            std::vector<std::string>{"relation"});
  EXPECT_EQ(get_template(TemplateName::kKgGeneration).slots,
            (std::vector<std::string>{"ont", "doc", "qa"}));
  for (auto name : {"CqGeneration", "CqAnswering", "RelationExtraction", "OntologyMatching",
                    "OntologyFormatting", "KgGeneration"}) {
    auto t = template_from_string(name);
    ASSERT_TRUE(t);
    EXPECT_EQ(to_string(*t), name);
  }
  EXPECT_FALSE(template_from_string("Other"));
}

TEST(Render, SubstitutesEverySlot) {
  std::string out = render(get_template(TemplateName::kOntologyMatching),
                           {{"p1", "teacher of"}, {"p2", "student"}});
  EXPECT_NE(out.find("Property 1: teacher of\nProperty 2: student"), std::string::npos);
  EXPECT_EQ(out.find("{p1}"), std::string::npos);
}

TEST(Render, SinglePass) {
  std::string out = render(get_template(TemplateName::kOntologyMatching),
                           {{"p1", "{p2}"}, {"p2", "{p1}"}});
  EXPECT_NE(out.find("Property 1: {p2}\nProperty 2: {p1}"), std::string::npos);
}

TEST(Render, SlotErrors) {
  const auto &t = get_template(TemplateName::kOntologyMatching);
  EXPECT_THROW(render(t, {{"p1", "x"}}), MissingSlot);
  EXPECT_THROW(render(t, {{"p1", "x"}, {"p2", "y"}, {"p3", "z"}}), UnknownSlot);
}

TEST(Render, BindingsHashIsOrderFreeAndValueSensitive) {
  Bindings a{{"doc", "d"}, {"query", "q"}};
  EXPECT_EQ(bindings_hash(a).size(), 16u);
  EXPECT_EQ(bindings_hash(a), bindings_hash(Bindings{{"query", "q"}, {"doc", "d"}}));
  EXPECT_NE(bindings_hash(a), bindings_hash(Bindings{{"doc", "d"}, {"query", "q2"}}));
}

TEST(Mock, LookupOrder) {
  testutil::TempDir dir;
  Bindings exact{{"doc", "D"}, {"query", "Where was she born?"}};
  write_mock(dir, {
                      {{"template", "CqAnswering"}, {"response", "default"}},
                      {{"template", "CqAnswering"}, {"when", {{"query", "born"}}}, {"response", "when"}},
                      {{"template", "CqAnswering"},
                       {"bindings_hash", bindings_hash(exact)},
                       {"response", "exact"}},
                      {{"template", "CqAnswering"}, {"when", {{"query", "Where"}}}, {"response", "later"}},
                  });
  MockBackend mock(dir.path());
  EXPECT_EQ(mock.fixture_count(), 4u);
  EXPECT_EQ(mock.send(answering("D", "Where was she born?")).content, "exact");
  EXPECT_EQ(mock.send(answering("E", "Where was she born?")).content, "when");
  EXPECT_EQ(mock.send(answering("E", "Where did she work?")).content, "later");
  EXPECT_EQ(mock.send(answering("E", "What?")).content, "default");
  try {
    mock.send(make_request(TemplateName::kOntologyMatching, {{"p1", "a"}, {"p2", "b"}}, {}));
    FAIL() << "expected ProviderError";
  } catch (const ProviderError &e) {
    EXPECT_EQ(e.status(), 404);
  }
}

TEST(Mock, ResponseFileAndBadFixtures) {
  testutil::TempDir dir;
  fs::write_atomic(dir / "kg.ttl", "@prefix ex: <http://e/> .\n");
  write_mock(dir, {{{"template", "KgGeneration"}, {"response_file", "kg.ttl"}, {"finish_reason", "length"}}});
  MockBackend mock(dir.path());
  auto r = mock.send(make_request(TemplateName::kKgGeneration, {{"ont", "o"}, {"doc", "d"}, {"qa", "q"}}, {}));
  EXPECT_EQ(r.content, "@prefix ex: <http://e/> .\n");
  EXPECT_EQ(r.finish_reason, FinishReason::kLength);

  write_mock(dir, {{{"template", "Nope"}, {"response", "x"}}});
  EXPECT_THROW(MockBackend{dir.path()}, SchemaError);
  write_mock(dir, {{{"template", "KgGeneration"}}});
  EXPECT_THROW(MockBackend{dir.path()}, SchemaError);
}

TEST(Gateway, CachesAndRecomputesCorruptEntries) {
  testutil::TempDir dir;
  write_mock(dir, {{{"template", "CqAnswering"}, {"response", "Tabriz"}}});
  GatewayOptions opts;
  opts.cache_dir = dir / "cache";
  Gateway gw(std::make_unique<MockBackend>(dir.path()), opts);
  auto req = answering("D", "Where?");
  EXPECT_EQ(gw.cached_complete(req).content, "Tabriz");
  EXPECT_EQ(gw.cached_complete(req).content, "Tabriz");
  EXPECT_EQ(gw.counters().backend_calls, 1u);
  EXPECT_EQ(gw.counters().cache_hits, 1u);

  auto path = cache_path(*opts.cache_dir, cache_key(req));
  ASSERT_TRUE(std::filesystem::exists(path));
  EXPECT_EQ(read_cache_entry(path, cache_key(req)).content, "Tabriz");
  fs::write_atomic(path, "{truncated");
  EXPECT_THROW(read_cache_entry(path, cache_key(req)), CacheCorrupt);
  EXPECT_EQ(gw.cached_complete(req).content, "Tabriz");
  EXPECT_EQ(gw.counters().cache_corrupt, 1u);
  EXPECT_EQ(gw.counters().backend_calls, 2u);
  EXPECT_EQ(read_cache_entry(path, cache_key(req)).content, "Tabriz");
}

TEST(Gateway, CacheKeyIgnoresProvenance) {
  auto a = answering("D", "Q");
  auto b = a;
  b.bindings.clear();
  b.template_name.reset();
  EXPECT_EQ(cache_key(a), cache_key(b));
  b.temperature = 0.5;
  EXPECT_NE(cache_key(a), cache_key(b));
  b = a;
  b.model = "other";
  EXPECT_NE(cache_key(a), cache_key(b));
}

TEST(Gateway, RejectsInvalidRequests) {
  Gateway none(nullptr);
  EXPECT_THROW(none.complete(answering("D", "Q")), ProviderError);
  Gateway gw(std::make_unique<SlowBackend>());
  ChatRequest empty;
  EXPECT_THROW(gw.complete(empty), ProviderError);
  auto neg = answering("D", "Q");
  neg.temperature = -1;
  EXPECT_THROW(gw.complete(neg), ProviderError);
}

TEST(Gateway, BoundsConcurrencyAndCountsTruncation) {
  auto backend = std::make_unique<SlowBackend>();
  auto *raw = backend.get();
  GatewayOptions opts;
  opts.max_in_flight = 2;
  Gateway gw(std::move(backend), opts);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&gw, i] { gw.complete(answering("D", std::to_string(i))); });
  }
  for (auto &t : threads) t.join();
  EXPECT_EQ(raw->calls_.load(), 8);
  EXPECT_LE(raw->peak_.load(), 2);
  EXPECT_EQ(gw.counters().truncated, 8u);
}

TEST(Ask, ErrorFinishIsProviderError) {
  testutil::TempDir dir;
  write_mock(dir, {{{"template", "CqAnswering"}, {"response", "x"}, {"finish_reason", "content_filter"}}});
  Gateway gw(std::make_unique<MockBackend>(dir.path()));
  EXPECT_THROW(ask(gw, {}, TemplateName::kCqAnswering, {{"doc", "D"}, {"query", "Q"}}), ProviderError);
}

TEST(Http, EncodeDecode) {
  auto req = answering("D", "Q");
  req.model = "m";
  req.max_output_tokens = 77;
  json j = json::parse(HttpBackend::encode_request(req));
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["max_tokens"], 77);
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], req.messages[0].content);
  EXPECT_FALSE(j.contains("bindings"));

  auto r = HttpBackend::decode_response(
      R"({"choices":[{"message":{"role":"assistant","content":"hi"},"finish_reason":"length"}]})");
  EXPECT_EQ(r.content, "hi");
  EXPECT_EQ(r.finish_reason, FinishReason::kLength);
  EXPECT_THROW(HttpBackend::decode_response("{}"), ProviderError);
  EXPECT_THROW(HttpBackend::decode_response("<html>"), ProviderError);
}

TEST(Http, RetriesTransientFailures) {
  std::atomic<int> calls{0};
  std::string auth;
  testutil::LocalServer server([&](httplib::Server &s) {
    s.Post("/v1/chat/completions", [&](const httplib::Request &req, httplib::Response &res) {
      auth = req.get_header_value("Authorization");
      if (calls++ < 2) {
        res.status = 503;
        return;
      }
      res.set_content(R"({"choices":[{"message":{"content":"done"},"finish_reason":"stop"}]})",
                      "application/json");
    });
  });
  HttpBackendOptions o;
  o.endpoint = server.url("/v1/chat/completions");
  o.api_key = "secret";
  o.retry.base_backoff = std::chrono::milliseconds(1);
  HttpBackend backend(o);
  EXPECT_EQ(backend.send(answering("D", "Q")).content, "done");
  EXPECT_EQ(calls.load(), 3);
  EXPECT_EQ(auth, "Bearer secret");
}

TEST(Http, BudgetExhaustedAndClientErrors) {
  testutil::LocalServer server([&](httplib::Server &s) {
    s.Post("/busy", [](const httplib::Request &, httplib::Response &res) { res.status = 429; });
    s.Post("/bad", [](const httplib::Request &, httplib::Response &res) {
      res.status = 401;
      res.set_content("unauthorized", "text/plain");
    });
  });
  HttpBackendOptions o;
  o.retry.base_backoff = std::chrono::milliseconds(1);
  o.endpoint = server.url("/busy");
  EXPECT_THROW(HttpBackend(o).send(answering("D", "Q")), BudgetExhausted);
  o.endpoint = server.url("/bad");
  try {
    HttpBackend(o).send(answering("D", "Q"));
    FAIL() << "expected ProviderError";
  } catch (const ProviderError &e) {
    EXPECT_EQ(e.status(), 401);
  }
}

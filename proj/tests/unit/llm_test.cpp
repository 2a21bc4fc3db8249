#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/hashing.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/llm/chat_client.hpp"
#include "aaechat/llm/transcript.hpp"
#include "test_support.hpp"

namespace aaechat::llm {
namespace {

using nlohmann::json;
using testing::ScriptedTransport;

ProviderConfig config(std::string model = "m-1") {
  ProviderConfig c;
  c.api_base = "http://provider.invalid/v1/";
  c.api_key = "secret";
  c.model_id = std::move(model);
  c.retry.sleep = [](std::chrono::milliseconds) {};
  return c;
}

TEST(Fingerprint, CanonicalFormIsCompactSortedJson) {
  ChatRequest r;
  r.model_id = "gpt-4o";
  r.messages.push_back({Role::user, "Hi \"there\"\n\xE2\x80\x94 ok"});
  EXPECT_EQ(canonical_form(r),
            "{\"max_tokens\":1024,\"messages\":[{\"content\":\"Hi \\\"there\\\"\\n\xE2\x80\x94 ok\",\"role\":\"user\"}],"
            "\"model\":\"gpt-4o\",\"temperature\":0.0}");
  EXPECT_EQ(fingerprint(r), sha256_hex(canonical_form(r)));
}

TEST(Fingerprint, SensitiveToEveryField) {
  ChatRequest base;
  base.model_id = "a";
  base.messages.push_back({Role::user, "x"});
  auto fp = fingerprint(base);
  auto r = base;
  r.model_id = "b";
  EXPECT_NE(fingerprint(r), fp);
  r = base;
  r.temperature = 0.5;
  EXPECT_NE(fingerprint(r), fp);
  r = base;
  r.max_tokens = 10;
  EXPECT_NE(fingerprint(r), fp);
  r = base;
  r.messages[0].text = "y";
  EXPECT_NE(fingerprint(r), fp);
  r = base;
  r.messages[0].role = Role::system;
  EXPECT_NE(fingerprint(r), fp);
}

TEST(Transcript, LaterEntriesWinAndRecordAppends) {
  testing::TempDir dir;
  const auto path = dir / "t.jsonl";
  {
    auto t = Transcript::open(path, true);
    t.add("fp1", {{"model", "m"}}, "one");
    t.add("fp2", {{"model", "m"}}, "two");
    t.add("fp1", {{"model", "m"}}, "uno");
  }
  EXPECT_EQ(read_jsonl(path).size(), 3u);
  const auto t = Transcript::open(path, false);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.find("fp1"), "uno");
  EXPECT_EQ(t.find("fp2"), "two");
  EXPECT_FALSE(t.find("fp3"));
}

TEST(ChatClient, ReplayNeverTouchesTheNetwork) {
  auto transcript = std::make_shared<Transcript>();
  auto counter = std::make_shared<std::atomic<int>>(0);
  ChatClient client(Mode::replay, config(), transcript, std::make_unique<testing::ForbiddenTransport>(counter));
  const auto req = client.make_request("hello");
  transcript->add(fingerprint(req), {}, "recorded");
  EXPECT_EQ(client.complete(req), "recorded");
  EXPECT_THROW(client.complete(client.make_request("other")), ReplayMissError);
  EXPECT_EQ(counter->load(), 0);
}

TEST(ChatClient, RecordStoresUnderFingerprint) {
  testing::TempDir dir;
  auto transcript = std::make_shared<Transcript>(Transcript::open(dir / "rec.jsonl", true));
  auto transport = std::make_unique<ScriptedTransport>(std::deque<HttpResponse>{testing::completion_response("answer")});
  auto* raw = transport.get();
  ChatClient client(Mode::record, config(), transcript, std::move(transport));
  const auto req = client.make_request("question");
  EXPECT_EQ(client.complete(req), "answer");
  ASSERT_EQ(raw->calls(), 1u);
  const auto sent = raw->requests()[0];
  EXPECT_EQ(sent.url, "http://provider.invalid/v1/chat/completions");
  EXPECT_EQ(sent.headers.at("Authorization"), "Bearer secret");
  const auto body = json::parse(sent.body);
  EXPECT_EQ(body["model"], "m-1");
  EXPECT_EQ(body["temperature"], 0.0);

  const auto rows = read_jsonl(dir / "rec.jsonl");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["fingerprint"], fingerprint(req));
  EXPECT_EQ(rows[0]["response"], "answer");

  // The recording replays offline.
  auto counter = std::make_shared<std::atomic<int>>(0);
  ChatClient replay(Mode::replay, config(), std::make_shared<Transcript>(Transcript::open(dir / "rec.jsonl", false)),
                    std::make_unique<testing::ForbiddenTransport>(counter));
  EXPECT_EQ(replay.complete(req), "answer");
  EXPECT_EQ(counter->load(), 0);
}

TEST(ChatClient, ProviderOptionsPassThrough) {
  auto c = config();
  c.options = {{"num_beams", 5}, {"model", "ignored"}};
  const auto wire = to_wire(ChatClient(Mode::live, c, nullptr, std::make_unique<ScriptedTransport>()).make_request("x"),
                            c.options);
  EXPECT_EQ(wire["num_beams"], 5);
  EXPECT_EQ(wire["model"], "m-1");
}

TEST(Retries, BoundedWithExponentialBackoff) {
  std::vector<long> sleeps;
  auto c = config();
  c.retry.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(static_cast<long>(d.count())); };
  auto transport = std::make_unique<ScriptedTransport>(std::deque<HttpResponse>{}, HttpResponse{503, {}, "busy"});
  auto* raw = transport.get();
  ChatClient client(Mode::live, c, nullptr, std::move(transport));
  try {
    client.complete(client.make_request("x"));
    FAIL() << "expected ProviderError";
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.attempts(), 3);
  }
  EXPECT_EQ(raw->calls(), 3u);
  EXPECT_EQ(sleeps, (std::vector<long>{500, 1000}));
}

TEST(Retries, RecoversAfterTransientFailure) {
  auto transport = std::make_unique<ScriptedTransport>(
      std::deque<HttpResponse>{{500, {}, ""}, {200, {}, "not json"}, testing::completion_response("ok")});
  auto* raw = transport.get();
  ChatClient client(Mode::live, config(), nullptr, std::move(transport));
  EXPECT_EQ(client.complete(client.make_request("x")), "ok");
  EXPECT_EQ(raw->calls(), 3u);
}

TEST(Retries, WithRetriesHonoursMaxAttempts) {
  for (int max = 1; max <= 5; ++max) {
    RetryPolicy p;
    p.max_attempts = max;
    p.sleep = [](std::chrono::milliseconds) {};
    int calls = 0;
    EXPECT_THROW(with_retries(p,
                              [&]() -> std::string {
                                ++calls;
                                throw Error("nope");
                              }),
                 ProviderError);
    EXPECT_EQ(calls, max);
  }
}

TEST(Wire, ContentFromBothResponseShapes) {
  EXPECT_EQ(content_from_wire(R"({"choices":[{"message":{"role":"assistant","content":"a"}}]})"), "a");
  EXPECT_EQ(content_from_wire(R"({"content":[{"type":"text","text":"b"},{"type":"text","text":"c"}]})"), "bc");
  EXPECT_THROW(content_from_wire("{}"), ParseError);
  EXPECT_THROW(content_from_wire("<html>"), ParseError);
}

TEST(ChatClient, ConfigurationErrors) {
  EXPECT_THROW(ChatClient(Mode::replay, config(), nullptr), ValidationError);
  auto c = config();
  c.api_base.clear();
  EXPECT_THROW(ChatClient(Mode::live, c, nullptr), ValidationError);
  EXPECT_EQ(mode_from_string("Record"), Mode::record);
  EXPECT_THROW(mode_from_string("offline"), ValidationError);
}

}  // namespace
}  // namespace aaechat::llm

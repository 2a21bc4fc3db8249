#include <gtest/gtest.h>

#include <httplib.h>

#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "aaechat/evalharness/ratings.hpp"
#include "aaechat/speech/wav.hpp"
#include "pipeline.hpp"
#include "serve.hpp"
#include "test_support.hpp"

namespace aaechat::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class ServeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new testing::TempDir("serve");
    const auto run = testing::run_fixture_pipeline(data_->path());
    ASSERT_EQ(run.exit_code, 0) << run.failed_step << "\n" << run.log;
    tasks_ = json::parse(testing::slurp(*data_ / "study" / "tasks.json"));
  }
  static void TearDownTestSuite() {
    delete data_;
    data_ = nullptr;
  }

  void start(const std::string& token = {}) {
    ServeConfig cfg;
    cfg.data_root = data_->path();
    cfg.tasks = *data_ / "study" / "tasks.json";
    cfg.ratings = ratings_dir_ / "ratings.csv";
    cfg.evaluator_token = token;
    server_ = std::make_unique<RaterServer>(cfg);
    port_ = server_->bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  json get_json(const std::string& path, int expected = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return nullptr;
    EXPECT_EQ(res->status, expected) << path << ": " << res->body;
    return json::parse(res->body);
  }

  httplib::Result post(const json& body, const httplib::Headers& headers = {}) {
    return client_->Post("/api/ratings", headers, body.dump(), "application/json");
  }

  static const json& first_task(const std::string& chatbot_prefix) {
    for (const auto& t : tasks_["tasks"]) {
      if (t["chatbot_id"].get<std::string>().starts_with(chatbot_prefix)) return t;
    }
    throw Error("no task for " + chatbot_prefix);
  }

  static json rating_for(const json& task, const std::string& metric, int score) {
    return {{"evaluator_id", task["evaluator_id"]},
            {"dialogue_id", task["dialogue_id"]},
            {"chatbot_id", task["chatbot_id"]},
            {"metric", metric},
            {"score", score}};
  }

  static inline testing::TempDir* data_ = nullptr;
  static inline json tasks_;
  testing::TempDir ratings_dir_{"ratings"};
  std::unique_ptr<RaterServer> server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServeTest, LoadsEveryStudyChatbot) {
  start();
  EXPECT_EQ(server_->chatbot_count(), 6u);
}

TEST_F(ServeTest, Metrics) {
  start();
  EXPECT_EQ(get_json("/api/metrics")["metrics"].size(), 15u);
  EXPECT_EQ(get_json("/api/metrics?modality=text")["metrics"].size(), 12u);
  const auto spoken = get_json("/api/metrics?modality=spoken");
  EXPECT_EQ(spoken["metrics"].size(), 12u);
  EXPECT_EQ(spoken["scale_labels"]["rate"][0], "Never");
  get_json("/api/metrics?modality=smell", 400);
}

TEST_F(ServeTest, AssignmentsTrackCompletion) {
  start();
  const auto& task = first_task("fixture:");
  const auto ev = task["evaluator_id"].get<std::string>();
  const auto before = get_json("/api/assignments/" + ev);
  EXPECT_EQ(before["completed"], 0);
  const auto total = before["total"].get<std::size_t>();
  EXPECT_EQ(before["tasks"].size(), total);

  json batch = json::array();
  const auto metrics = get_json("/api/metrics?modality=text");
  for (const auto& m : metrics["metrics"]) batch.push_back(rating_for(task, m["name"], 3));
  auto res = post(batch);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201) << res->body;
  const auto after = get_json("/api/assignments/" + ev);
  EXPECT_EQ(after["completed"], 1);
  EXPECT_EQ(after["tasks"].size(), total - 1);
  get_json("/api/assignments/nobody", 404);
}

TEST_F(ServeTest, TextDialogue) {
  start();
  const auto& task = first_task("fixture:high");
  const auto body = get_json("/api/dialogues/" + task["dialogue_id"].get<std::string>() + "?chatbot=fixture:high");
  EXPECT_EQ(body["modality"], "text");
  EXPECT_EQ(body["turns"].size(), 10u);
  EXPECT_EQ(body["metrics"].size(), 12u);
  EXPECT_FALSE(body.contains("audio_url"));
  for (const auto& m : body["metrics"]) {
    EXPECT_EQ(m["rendered_statement"].get<std::string>().find("{role}"), std::string::npos);
  }
  get_json("/api/dialogues/" + task["dialogue_id"].get<std::string>(), 400);
  get_json("/api/dialogues/" + task["dialogue_id"].get<std::string>() + "?chatbot=nope:x", 404);
  get_json("/api/dialogues/missing?chatbot=fixture:high", 404);
}

TEST_F(ServeTest, SpokenDialogueAudioAndTimeline) {
  start();
  const auto& task = first_task("spoken:high");
  const auto id = task["dialogue_id"].get<std::string>();
  const auto body = get_json("/api/dialogues/" + id + "?chatbot=spoken:high");
  EXPECT_EQ(body["modality"], "spoken");
  ASSERT_TRUE(body.contains("audio_url"));
  auto audio = client_->Get(body["audio_url"].get<std::string>());
  ASSERT_TRUE(audio);
  EXPECT_EQ(audio->status, 200);
  EXPECT_EQ(audio->get_header_value("Content-Type"), "audio/wav");
  EXPECT_NE(audio->get_header_value("Link").find("rel=\"timeline\""), std::string::npos);
  const std::vector<std::uint8_t> bytes(audio->body.begin(), audio->body.end());
  const auto pcm = speech::decode_wav(bytes);
  const auto timeline = get_json(body["timeline_url"].get<std::string>());
  ASSERT_EQ(timeline["timeline"].size(), 10u);
  EXPECT_NEAR(timeline["timeline"].back()["end_s"].get<double>(), pcm.duration_seconds(), 1e-6);
  auto missing = client_->Get("/api/audio/" + id + "?chatbot=fixture:high");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST_F(ServeTest, RatingsValidationAndConflicts) {
  start();
  const auto& task = first_task("spoken:sa");
  auto ok = rating_for(task, "Speech Clarity", 4);

  auto res = client_->Post("/api/ratings", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  auto bad = ok;
  bad["score"] = 0;
  res = post(bad);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["errors"][0]["field"], "score");

  res = post(rating_for(task, "Text Fidelity", 3));
  EXPECT_EQ(res->status, 400);

  auto stranger = ok;
  stranger["evaluator_id"] = "nobody";
  EXPECT_EQ(post(stranger)->status, 404);
  auto no_dialogue = ok;
  no_dialogue["dialogue_id"] = "missing";
  EXPECT_EQ(post(no_dialogue)->status, 404);

  res = post(ok);
  EXPECT_EQ(res->status, 201) << res->body;
  res = post(ok);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body)["duplicates"].size(), 1u);

  // A batch with an internal duplicate stores nothing.
  auto warmth = rating_for(task, "Warmth", 2);
  EXPECT_EQ(post(json::array({warmth, warmth}))->status, 409);
  EXPECT_EQ(post(json::array())->status, 400);

  const auto stored = evalharness::read_ratings_csv(ratings_dir_ / "ratings.csv");
  ASSERT_EQ(stored.size(), 1u);
  EXPECT_EQ(stored[0].metric, "Speech Clarity");
  EXPECT_EQ(stored[0].timestamp.size(), 20u);
}

TEST_F(ServeTest, ConcurrentPostsStoreEachKeyOnce) {
  start();
  const auto& task = first_task("fixture:low");
  std::atomic<int> created{0};
  std::atomic<int> conflicts{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&] {
      httplib::Client c("127.0.0.1", port_);
      for (const auto* metric : {"Warmth", "Trustworthiness", "Comprehension"}) {
        auto res = c.Post("/api/ratings", rating_for(task, metric, 5).dump(), "application/json");
        if (res && res->status == 201) ++created;
        if (res && res->status == 409) ++conflicts;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(created.load(), 3);
  EXPECT_EQ(conflicts.load(), 15);
  EXPECT_EQ(evalharness::read_ratings_csv(ratings_dir_ / "ratings.csv").size(), 3u);
}

TEST_F(ServeTest, TokenRequired) {
  start("s3cret");
  get_json("/api/metrics", 401);
  get_json("/api/metrics?token=wrong", 401);
  get_json("/api/metrics?token=s3cret", 200);
  auto res = client_->Get("/api/metrics", {{"X-Evaluator-Token", "s3cret"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(post(rating_for(first_task("fixture:"), "Warmth", 3))->status, 401);
}

TEST_F(ServeTest, UnknownChatbotInStudyIsRejected) {
  testing::TempDir dir;
  json doc = tasks_;
  doc["tasks"][0]["chatbot_id"] = "ghost:high";
  std::ofstream(dir / "tasks.json") << doc.dump();
  ServeConfig cfg;
  cfg.data_root = data_->path();
  cfg.tasks = dir / "tasks.json";
  cfg.ratings = dir / "ratings.csv";
  EXPECT_THROW(RaterServer{cfg}, ValidationError);
}

}  // namespace
}  // namespace aaechat::cli

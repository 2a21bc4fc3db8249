#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "cli.hpp"
#include "fake_provider.hpp"
#include "manifest.hpp"
#include "test_support.hpp"

namespace aaechat::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Captured {
  int code = 0;
  std::string out;
  std::string err;
};

Captured run(const std::vector<std::string>& args, std::function<std::unique_ptr<llm::HttpTransport>()> make = {}) {
  std::ostringstream out;
  std::ostringstream err;
  CliEnv env;
  env.out = &out;
  env.err = &err;
  auto counter = std::make_shared<std::atomic<int>>(0);
  env.transport = [&](std::string_view) -> std::unique_ptr<llm::HttpTransport> {
    if (make) return make();
    return std::make_unique<testing::ForbiddenTransport>(counter);
  };
  const int code = run_cli(args, env);
  return {code, out.str(), err.str()};
}

const std::string kManifest = testing::fixture_path("pipeline/manifest.json").string();

// The fixture manifest with every relative path made absolute, so a copy can
// live in a temp dir.
json portable_manifest() {
  std::ifstream f(kManifest);
  auto doc = json::parse(f);
  const auto base = testing::fixture_path("pipeline");
  auto abs = [&](json& v) { v = (base / v.get<std::string>()).string(); };
  abs(doc["corpus"]);
  for (auto& p : doc["providers"]) abs(p["transcript"]);
  abs(doc["tagger"]["transcript"]);
  for (auto& s : doc["speakers"]) abs(s["reference_audio"]);
  return doc;
}

fs::path write_manifest(const testing::TempDir& dir, const json& doc) {
  const auto p = dir / "manifest.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"ingest", "--no-such-flag"}).code, 2);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("eval-aggregate"), std::string::npos);
  EXPECT_EQ(run({"translate", "--help"}).code, 0);
  EXPECT_EQ(run({"ingest", "-m", "/nonexistent/manifest.json"}).code, 1);
}

TEST(Cli, UnknownManifestKeysAreReported) {
  testing::TempDir dir;
  auto doc = portable_manifest();
  doc["colour"] = "blue";
  doc["sampling"]["per_domian"] = 3;
  const auto r = run({"ingest", "-m", write_manifest(dir, doc).string(), "--output-dir", (dir / "out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  EXPECT_NE(r.err.find("per_domian"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "out" / "sampled.jsonl"));
}

TEST(Cli, ManifestHashIgnoresFormatting) {
  auto doc = portable_manifest();
  EXPECT_EQ(manifest_hash(doc), manifest_hash(json::parse(doc.dump())));
  auto changed = doc;
  changed["seeds"]["sample"] = 8;
  EXPECT_NE(manifest_hash(doc), manifest_hash(changed));
  const auto m = RunManifest::load(kManifest);
  EXPECT_EQ(m.providers.size(), 1u);
  EXPECT_EQ(m.speakers.size(), 3u);
  EXPECT_EQ(m.study.evaluators.size(), 12u);
}

TEST(Cli, ChatbotIdsAndSlugs) {
  EXPECT_EQ(text_chatbot_id("gpt", dialect::DialectLevel::high), "gpt:high");
  EXPECT_EQ(spoken_chatbot_id(dialect::DialectLevel::low), "spoken:low");
  EXPECT_EQ(slug("gpt:high"), "gpt_high");
  EXPECT_EQ(slug("neuralmagic/Meta-Llama"), "neuralmagic_Meta-Llama");
  EXPECT_EQ(slug(".hidden"), "_.hidden");
}

TEST(Cli, IngestIsDeterministicAcrossOutputDirs) {
  testing::TempDir a;
  testing::TempDir b;
  ASSERT_EQ(run({"ingest", "-m", kManifest, "--output-dir", a.path().string()}).code, 0);
  ASSERT_EQ(run({"ingest", "-m", kManifest, "--output-dir", b.path().string()}).code, 0);
  EXPECT_EQ(testing::read_tree(a.path()), testing::read_tree(b.path()));
  const auto prov = json::parse(testing::slurp(a / "sampled.jsonl.provenance.json"));
  EXPECT_EQ(prov["subcommand"], "ingest");
  EXPECT_EQ(prov["manifest_hash"], RunManifest::load(kManifest).hash);
  EXPECT_EQ(prov["seeds"]["sample"], 7);

  testing::TempDir c;
  ASSERT_EQ(run({"ingest", "-m", kManifest, "--output-dir", c.path().string(), "--seed", "8"}).code, 0);
  EXPECT_NE(testing::slurp(a / "sampled.jsonl"), testing::slurp(c / "sampled.jsonl"));
}

TEST(Cli, TranslateReplayMissFailsWithoutOutput) {
  testing::TempDir dir;
  auto doc = portable_manifest();
  std::ofstream(dir / "empty.jsonl");
  doc["providers"][0]["transcript"] = (dir / "empty.jsonl").string();
  const auto manifest = write_manifest(dir, doc).string();
  const auto out = (dir / "out").string();
  ASSERT_EQ(run({"ingest", "-m", manifest, "--output-dir", out}).code, 0);
  const auto r = run({"translate", "-m", manifest, "--output-dir", out, "--level", "High"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no recorded response"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "out" / "translated" / "fixture_high.jsonl"));
}

TEST(Cli, RecordThenReplayTranslate) {
  testing::TempDir dir;
  auto doc = portable_manifest();
  std::ofstream(dir / "rec.jsonl");
  doc["providers"][0]["transcript"] = (dir / "rec.jsonl").string();
  doc["sampling"]["per_domain"] = 2;
  const auto manifest = write_manifest(dir, doc).string();
  const auto out = (dir / "out").string();
  ASSERT_EQ(run({"ingest", "-m", manifest, "--output-dir", out}).code, 0);
  const auto rec = run({"translate", "-m", manifest, "--output-dir", out, "--mode", "record", "--level", "Medium"},
                       [] { return std::make_unique<fixturegen::FakeProvider>(); });
  ASSERT_EQ(rec.code, 0) << rec.err;
  const auto recorded = testing::slurp(dir / "out" / "translated" / "fixture_medium.jsonl");
  fs::remove_all(dir / "out" / "translated");
  const auto rep = run({"translate", "-m", manifest, "--output-dir", out, "--level", "Medium", "-j", "4"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(testing::slurp(dir / "out" / "translated" / "fixture_medium.jsonl"), recorded);
}

TEST(Cli, BadLevelAndProviderFail) {
  testing::TempDir dir;
  const auto out = dir.path().string();
  ASSERT_EQ(run({"ingest", "-m", kManifest, "--output-dir", out}).code, 0);
  EXPECT_EQ(run({"translate", "-m", kManifest, "--output-dir", out, "--level", "Extreme"}).code, 1);
  EXPECT_EQ(run({"translate", "-m", kManifest, "--output-dir", out, "--provider", "nope"}).code, 1);
  EXPECT_EQ(run({"translate", "-m", kManifest, "--output-dir", out, "--history", "both"}).code, 1);
}

TEST(Cli, AggregateWritesReportAndPlot) {
  testing::TempDir dir;
  const auto out = dir.path().string();
  const auto ratings = testing::fixture_path("pipeline/ratings.csv").string();
  const auto r = run({"eval-aggregate", "-m", kManifest, "--output-dir", out, "--ratings", ratings});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = testing::slurp(dir / "report" / "report.csv");
  EXPECT_TRUE(csv.starts_with("chatbot_id,metric,n,mean,ci95_half_width"));
  // 4 text chatbots and 2 spoken ones, 12 metrics each.
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 6 * 12);
  const auto plot = json::parse(testing::slurp(dir / "report" / "report.plot.json"));
  EXPECT_TRUE(plot["metrics"]["Warmth"]["baseline"].contains("fixture:sae"));
  EXPECT_EQ(run({"eval-aggregate", "-m", kManifest, "--output-dir", out, "--ratings", ratings, "--ci", "bogus"}).code,
            1);
}

}  // namespace
}  // namespace aaechat::cli

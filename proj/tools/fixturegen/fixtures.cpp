#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/random.hpp"
#include "aaechat/evalharness/assignments.hpp"
#include "aaechat/evalharness/metrics.hpp"
#include "aaechat/evalharness/ratings.hpp"
#include "aaechat/speech/wav.hpp"
#include "cli.hpp"
#include "fake_provider.hpp"
#include "synthetic_corpus.hpp"

namespace aaechat::fixturegen {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Voice {
  const char* id;
  const char* role;
  int freq;
  const char* transcript;
};

const Voice kVoices[] = {
    {"ATL_se0_ag2_f_02_1", "chatbot_aa", 210, "I been living here my whole life and I love it."},
    {"1926-147987-0005", "user_sa", 140, "He walked slowly along the edge of the river."},
    {"298-126790-0034", "chatbot_sa", 180, "The meeting was moved to the following afternoon."},
};

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
}

void write_voice(const fs::path& path, int freq) {
  speech::PcmAudio audio;
  audio.sample_rate = 8000;
  audio.samples.resize(8000 * 2);
  const int period = audio.sample_rate / freq;
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    audio.samples[i] = static_cast<std::int16_t>((static_cast<int>(i) % period) < period / 2 ? 3000 : -3000);
  }
  speech::write_wav(path, audio);
}

json manifest_doc() {
  json speakers = json::array();
  for (const auto& v : kVoices) {
    speakers.push_back({{"id", v.id},
                        {"role", v.role},
                        {"reference_audio", std::string("voices/") + v.id + ".wav"},
                        {"reference_transcript", v.transcript}});
  }
  json evaluators = json::array();
  for (int i = 1; i <= 12; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "e%02d", i);
    evaluators.push_back(buf);
  }
  return {
      {"corpus", "corpus.jsonl"},
      {"sampling", {{"per_domain", 20}, {"turn_count", 10}}},
      {"levels", {"SAE", "Low", "Medium", "High"}},
      {"history", "translated"},
      {"providers",
       {{{"id", "fixture"},
         {"model_id", "fixture-rewriter-1"},
         {"api_base", "http://127.0.0.1:9/v1"},
         {"transcript", "transcripts/fixture.jsonl"}}}},
      {"tagger",
       {{"model_id", "fixture-tagger-1"},
        {"api_base", "http://127.0.0.1:9/v1"},
        {"transcript", "transcripts/tagger.jsonl"}}},
      {"mode", {{"llm", "replay"}, {"tts", "stub"}}},
      {"tts", {{"stub_sample_rate", 4000}, {"stub_ms_per_word", 300}, {"pause_ms", 500}, {"split_threshold", 30}}},
      {"speakers", speakers},
      {"seeds", {{"sample", 7}, {"tag_sample", 11}, {"assign", 13}}},
      {"output_dir", "out"},
      {"study",
       {{"evaluators", evaluators},
        {"chatbots", {"fixture:sae", "fixture:low", "fixture:medium", "fixture:high", "spoken:high", "spoken:sa"}},
        {"baseline", {"fixture:sae", "spoken:sa"}}}},
  };
}

void run(const std::vector<std::string>& args, const cli::CliEnv& env) {
  if (const int code = cli::run_cli(args, env); code != 0) {
    std::string joined;
    for (const auto& a : args) joined += " " + a;
    throw Error("fixture step failed (exit " + std::to_string(code) + "):" + joined);
  }
}

// Scores lean on the chatbot so the generated report has some structure.
int base_score(const std::string& chatbot_id) {
  if (chatbot_id.ends_with(":sae") || chatbot_id.ends_with(":sa") || chatbot_id.ends_with(":low")) return 4;
  return 3;
}

std::string make_ratings(const json& study) {
  const auto tasks = evalharness::tasks_from_json(study);
  SeededRng rng(2024);
  std::string out(evalharness::kRatingsHeader);
  out += "\n";
  int minute = 0;
  for (const auto& t : tasks) {
    for (const auto& metric : evalharness::metrics_for(evalharness::infer_chatbot_modality(t.chatbot_id))) {
      int score = base_score(t.chatbot_id) + static_cast<int>(rng.uniform_below(3)) - 1;
      if (metric.reversed) score = 6 - score;
      score = std::clamp(score, 1, 5);
      char ts[32];
      std::snprintf(ts, sizeof ts, "2025-03-%02dT%02d:%02d:00Z", 1 + minute / 1440 % 28, minute / 60 % 24,
                    minute % 60);
      ++minute;
      out += evalharness::format_rating_row({t.evaluator_id, t.dialogue_id, t.chatbot_id, metric.name, score, ts});
    }
  }
  return out;
}

}  // namespace

void write_pipeline_fixtures(const fs::path& dir, const fs::path& gold) {
  if (!fs::exists(gold)) throw IoError("gold set not found: " + gold.string());
  fs::create_directories(dir / "voices");
  for (const auto& v : kVoices) write_voice(dir / "voices" / (std::string(v.id) + ".wav"), v.freq);
  write_text(dir / "corpus.jsonl", make_synthetic_corpus());
  write_text(dir / "manifest.json", manifest_doc().dump(2) + "\n");

  fs::remove_all(dir / "transcripts");
  // Replay-mode manifest validation wants the transcripts to exist.
  write_text(dir / "transcripts" / "fixture.jsonl", "");
  write_text(dir / "transcripts" / "tagger.jsonl", "");

  const auto work = fs::temp_directory_path() / ("aaechat-fixturegen-" + std::to_string(::getpid()));
  fs::remove_all(work);
  std::ostringstream sink;
  cli::CliEnv env;
  env.transport = [](std::string_view) { return std::make_unique<FakeProvider>(); };
  env.out = &sink;
  env.err = &sink;

  const auto manifest = (dir / "manifest.json").string();
  const auto out = work.string();
  try {
    run({"ingest", "-m", manifest, "--output-dir", out}, env);
    run({"translate", "-m", manifest, "--output-dir", out, "--mode", "record"}, env);
    run({"tag", "-m", manifest, "--output-dir", out, "--mode", "record"}, env);
    run({"tag-eval", "-m", manifest, "--output-dir", out, "--mode", "record", "--gold", gold.string()}, env);
    run({"eval-assign", "-m", manifest, "--output-dir", out}, env);
    std::ifstream f(work / "study" / "tasks.json");
    write_text(dir / "ratings.csv", make_ratings(json::parse(f).at("tasks")));
  } catch (...) {
    fs::remove_all(work);
    throw;
  }
  fs::remove_all(work);
}

}  // namespace aaechat::fixturegen

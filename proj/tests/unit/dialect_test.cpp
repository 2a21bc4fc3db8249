#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/corpus/corpus.hpp"
#include "aaechat/dialect/dialect.hpp"
#include "aaechat/llm/transcript.hpp"
#include "fake_provider.hpp"
#include "test_support.hpp"

namespace aaechat::dialect {
namespace {

using corpus::Side;
using nlohmann::json;

std::size_t count(const std::string& haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

corpus::Dialogue tutoring_dialogue() {
  const auto rows = read_jsonl(testing::fixture_path("tutoring/sampled.jsonl"));
  return corpus::dialogue_from_json(rows.at(0));
}

std::vector<HistoryLine> history_of(const corpus::Dialogue& d) {
  std::vector<HistoryLine> h;
  for (const auto& t : d.turns) h.push_back({t.side, t.text});
  return h;
}

llm::ProviderConfig fake_config() {
  llm::ProviderConfig c;
  c.api_base = "http://fake.invalid/v1";
  c.model_id = "fake";
  return c;
}

TEST(Levels, InstructionStringsAreVerbatim) {
  EXPECT_NE(translation_instruction(DialectLevel::low).find("stays close to Standard American English"),
            std::string_view::npos);
  EXPECT_NE(translation_instruction(DialectLevel::medium).find("a mixture of"), std::string_view::npos);
  EXPECT_NE(translation_instruction(DialectLevel::high).find("heavy African American Vernacular English usage"),
            std::string_view::npos);
  EXPECT_EQ(translation_instruction(DialectLevel::sae), "Speech is in Standard American English.");
}

TEST(Levels, ParseAndPrint) {
  for (auto lv : kAllLevels) EXPECT_EQ(level_from_string(to_string(lv)), lv);
  EXPECT_EQ(level_from_string(" high "), DialectLevel::high);
  EXPECT_THROW(level_from_string("extreme"), ValidationError);
}

TEST(Prompt, MatchesGoldenFiles) {
  const auto d = tutoring_dialogue();
  const auto expected = read_json_file(testing::fixture_path("tutoring/expected.json"));
  for (auto lv : {DialectLevel::low, DialectLevel::medium, DialectLevel::high}) {
    auto history = history_of(d);
    const std::string name = text::to_lower(to_string(lv));
    EXPECT_EQ(build_translation_prompt(history, 1, lv).rendered_text,
              testing::slurp(testing::fixture_path("tutoring/prompts/" + name + "_t1.txt")));
    history[1].text = expected["gpt"][std::string(to_string(lv))][1].get<std::string>();
    EXPECT_EQ(build_translation_prompt(history, 3, lv).rendered_text,
              testing::slurp(testing::fixture_path("tutoring/prompts/" + name + "_t3.txt")));
  }
}

TEST(Prompt, ExactlyOneStarredTargetAndLevelString) {
  const auto d = tutoring_dialogue();
  const auto history = history_of(d);
  for (auto lv : kAllLevels) {
    for (int target : {1, 3}) {
      const auto p = build_translation_prompt(history, target, lv);
      EXPECT_EQ(count(p.rendered_text, "\n**System: "), 1u);
      EXPECT_EQ(count(p.rendered_text, "**\n"), 1u);
      EXPECT_EQ(count(p.rendered_text, translation_instruction(lv)), 1u);
      EXPECT_EQ(p.source_text, d.turns[static_cast<std::size_t>(target)].text);
      EXPECT_TRUE(p.rendered_text.ends_with("Modified:"));
      // Turns after the target are not shown.
      if (target == 1) EXPECT_EQ(p.rendered_text.find(d.turns[2].text), std::string::npos);
    }
  }
}

TEST(Prompt, HistoryTextIsNotTreatedAsSlots) {
  std::vector<HistoryLine> h = {{Side::user, "what is {translation_instruction}?"}, {Side::chatbot, "{age}"}};
  const auto p = build_translation_prompt(h, 1, DialectLevel::low);
  EXPECT_NE(p.rendered_text.find("User: what is {translation_instruction}?"), std::string::npos);
  EXPECT_NE(p.rendered_text.find("**System: {age}**"), std::string::npos);
}

TEST(Prompt, RejectsBadTargets) {
  std::vector<HistoryLine> h = {{Side::user, "a"}, {Side::chatbot, "b"}};
  EXPECT_THROW(build_translation_prompt(h, 0, DialectLevel::low), ValidationError);
  EXPECT_THROW(build_translation_prompt(h, 2, DialectLevel::low), ValidationError);
  EXPECT_THROW(build_translation_prompt(h, -1, DialectLevel::low), ValidationError);
}

TEST(CleanOutput, StripsWrappers) {
  EXPECT_EQ(clean_model_output("Modified: Aight, bet."), "Aight, bet.");
  EXPECT_EQ(clean_model_output("  **System: Aight, bet.**  "), "Aight, bet.");
  EXPECT_EQ(clean_model_output("\"Aight, bet.\""), "Aight, bet.");
  EXPECT_EQ(clean_model_output("\xE2\x80\x9C" "Aight, bet." "\xE2\x80\x9D"), "Aight, bet.");
  EXPECT_EQ(clean_model_output("System: Aight"), "Aight");
  EXPECT_EQ(clean_model_output("Aight \"quoted\" word"), "Aight \"quoted\" word");
}

TEST(Translate, TutoringExchangeReplaysExactly) {
  const auto d = tutoring_dialogue();
  const auto expected = read_json_file(testing::fixture_path("tutoring/expected.json"));
  const std::map<std::string, std::string> models = {
      {"gpt", "gpt-4o"},
      {"claude", "claude-3-5-sonnet"},
      {"llama", "neuralmagic/Meta-Llama-3.1-70B-Instruct-quantized.w4a16"}};
  for (const auto& [provider, model] : models) {
    auto transcript = std::make_shared<llm::Transcript>(
        llm::Transcript::open(testing::fixture_path("tutoring/transcripts/" + provider + ".jsonl"), false));
    llm::ProviderConfig c;
    c.model_id = model;
    llm::ChatClient client(llm::Mode::replay, c, transcript);
    for (auto lv : {DialectLevel::low, DialectLevel::medium, DialectLevel::high}) {
      const auto out = translate_dialogue(d, lv, client);
      const auto& want = expected[provider][std::string(to_string(lv))];
      ASSERT_EQ(out.turns.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(out.turns[i].text, want[i].get<std::string>()) << provider << " " << to_string(lv) << " " << i;
      }
    }
  }
}

TEST(Translate, OriginalHistoryMissesTheTranslatedRecording) {
  // The recording was made with rewritten history, so replaying with the
  // original history must miss on the second chatbot turn.
  const auto d = tutoring_dialogue();
  auto transcript = std::make_shared<llm::Transcript>(
      llm::Transcript::open(testing::fixture_path("tutoring/transcripts/gpt.jsonl"), false));
  llm::ProviderConfig c;
  c.model_id = "gpt-4o";
  llm::ChatClient client(llm::Mode::replay, c, transcript);
  try {
    translate_dialogue(d, DialectLevel::high, client, {HistorySource::original});
    FAIL() << "expected a TranslationError";
  } catch (const TranslationError& e) {
    EXPECT_EQ(e.failed_turn(), 3);
    EXPECT_EQ(e.partial().turns[1].text, "Aight, lemme see whatchu workin' wit. Where it messin' you up at?");
    EXPECT_EQ(e.partial().turns[3].text, d.turns[3].text);
  }
}

TEST(Translate, UserTurnsUntouchedChatbotTurnsReplaced) {
  const auto corpus = corpus::sample_domains(
      corpus::parse_dialogue_corpus_file(testing::fixture_path("pipeline/corpus.jsonl").string()).dialogues,
      corpus::default_domains(), {4, 10, 1});
  llm::ChatClient client(llm::Mode::live, fake_config(), nullptr, std::make_unique<fixturegen::FakeProvider>());
  for (auto lv : {DialectLevel::low, DialectLevel::medium, DialectLevel::high}) {
    for (const auto& d : corpus) {
      const auto out = translate_dialogue(d, lv, client);
      ASSERT_EQ(out.turns.size(), d.turns.size());
      for (std::size_t i = 0; i < d.turns.size(); ++i) {
        EXPECT_EQ(out.turns[i].side, d.turns[i].side);
        EXPECT_EQ(out.turns[i].speaker_label, d.turns[i].speaker_label);
        if (d.turns[i].side == Side::user) {
          EXPECT_EQ(out.turns[i].text, d.turns[i].text);
        } else {
          EXPECT_NE(out.turns[i].text, d.turns[i].text);
        }
      }
    }
  }
}

TEST(Translate, EmptyOutputAborts) {
  auto d = tutoring_dialogue();
  auto transport = std::make_unique<testing::ScriptedTransport>(std::deque<llm::HttpResponse>{
      testing::completion_response("Fine."), testing::completion_response("Modified:   ")});
  llm::ChatClient client(llm::Mode::live, fake_config(), nullptr, std::move(transport));
  Diagnostics diag;
  try {
    translate_dialogue(d, DialectLevel::low, client, {}, &diag);
    FAIL() << "expected a TranslationError";
  } catch (const TranslationError& e) {
    EXPECT_EQ(e.failed_turn(), 3);
    EXPECT_EQ(e.partial().turns[1].text, "Fine.");
  }
  EXPECT_TRUE(diag.contains("aborted at turn 3"));
}

TEST(Translate, OverlongOutputIsFlagged) {
  std::vector<HistoryLine> h = {{Side::user, "Hi."}, {Side::chatbot, "Hello."}};
  const auto p = build_translation_prompt(h, 1, DialectLevel::high);
  auto transport = std::make_unique<testing::ScriptedTransport>(
      std::deque<llm::HttpResponse>{testing::completion_response(std::string(200, 'a'))});
  llm::ChatClient client(llm::Mode::live, fake_config(), nullptr, std::move(transport));
  Diagnostics diag;
  EXPECT_EQ(translate_turn(p, client, &diag).size(), 200u);
  EXPECT_TRUE(diag.contains("flagged for review"));
}

TEST(Translate, UnassignedSidesAreRejected) {
  auto d = tutoring_dialogue();
  d.turns[0].side = Side::unassigned;
  llm::ChatClient client(llm::Mode::live, fake_config(), nullptr, std::make_unique<fixturegen::FakeProvider>());
  EXPECT_THROW(translate_dialogue(d, DialectLevel::low, client), ValidationError);
}

}  // namespace
}  // namespace aaechat::dialect

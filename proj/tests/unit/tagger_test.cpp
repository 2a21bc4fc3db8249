#include <gtest/gtest.h>

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/random.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/tagger/accuracy.hpp"
#include "aaechat/tagger/rates.hpp"
#include "aaechat/tagger/tag_result.hpp"
#include "aaechat/tagger/tagger.hpp"
#include "aaechat/tagger/taxonomy.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace aaechat::tagger {
namespace {

using nlohmann::json;

std::vector<GoldExample> gold_examples() { return gold_from_json(read_json_file(testing::fixture_path("tagging/gold.json"))); }

std::vector<TagResult> predictions_from(const std::string& rel) {
  std::vector<TagResult> out;
  for (const auto& e : read_json_file(testing::fixture_path(rel))) out.push_back(parse_tag_result(e.dump()));
  return out;
}

std::string random_text(SeededRng& rng, std::size_t max_words) {
  static const std::vector<std::string> words = {
      "they", "was", "gon", "ain't", "\"quoted\"", "{brace}", "[bracket]", "back\\slash", "caf\xC3\xA9",
      "dolluh", "y'all", "finna", "\xE2\x80\x94", "be", "real", "good", "NEW", "tab\there", "50%", "}"};
  std::string out;
  const auto n = 1 + rng.uniform_below(max_words);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += words[rng.uniform_below(words.size())];
  }
  return out;
}

TagResult random_result(SeededRng& rng) {
  static const std::vector<std::string> features = {"Habitual \"be\"", "Ain't as Negator", "Copula Deletion",
                                                    "TH-Stopping", "Plural Marker s", "Multiple Negation"};
  TagResult r;
  r.aave_sentence = random_text(rng, 12);
  r.sae_translation = random_text(rng, 12);
  const auto n = rng.uniform_below(6);
  for (std::uint64_t i = 0; i < n; ++i) {
    Change c;
    c.aave_phrase = rng.uniform_below(2)
                        ? std::string(text::utf8_prefix(r.aave_sentence, 1 + rng.uniform_below(r.aave_sentence.size())))
                        : random_text(rng, 3);
    c.sae_phrase = c.aave_phrase + " x";
    c.feature_label = features[rng.uniform_below(features.size())];
    c.is_new = rng.uniform_below(3) == 0;
    c.category = kAllCategories[rng.uniform_below(std::size(kAllCategories))];
    r.changes.push_back(c);
  }
  mark_spans(r);
  return r;
}

TEST(TagParser, RoundTripOnRandomResults) {
  SeededRng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto r = random_result(rng);
    const auto text = serialize_tag_result(r);
    const auto back = parse_tag_result(text);
    ASSERT_EQ(back, r) << text;
    EXPECT_EQ(serialize_tag_result(back), text);
  }
}

TEST(TagParser, ExampleRepliesParseToGoldLabels) {
  const auto gold = gold_examples();
  const auto replies = read_json_file(testing::fixture_path("tagging/example_replies.json"));
  ASSERT_EQ(replies.size(), gold.size());
  std::size_t matched = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    Diagnostics diag;
    const auto r = parse_tag_result(replies[i].get<std::string>(), &diag);
    EXPECT_TRUE(diag.empty()) << diag.messages().front();
    EXPECT_EQ(r.aave_sentence, gold[i].text);
    ASSERT_EQ(r.changes.size(), gold[i].labels.size());
    for (std::size_t k = 0; k < r.changes.size(); ++k) {
      ++total;
      const auto& c = r.changes[k];
      const auto& g = gold[i].labels[k];
      if (c.aave_phrase == g.span && c.feature_label == g.feature && c.category == g.category && c.span_found &&
          !c.is_new) {
        ++matched;
      }
    }
  }
  EXPECT_EQ(total, 8u);
  EXPECT_EQ(matched, 8u);
}

TEST(TagParser, PromptExampleSplitsOneChangeIntoTwoFeatures) {
  const auto r = parse_tag_result(
      R"({"AAVE sentence": "She only has three dolluh", "SAE translation": "She only has three dollars",
          "Changes": [["three dolluh", "three dollars", "Plural Marker s", "morphology"],
                      ["three dolluh", "three dollars", "Phonological Reduction", "phonetics"]]})");
  ASSERT_EQ(r.changes.size(), 2u);
  EXPECT_EQ(r.changes[0].category, Category::morphology);
  EXPECT_EQ(r.changes[1].category, Category::phonology);
  EXPECT_EQ(r.count(Category::phonology), 1u);

  const auto gold = gold_from_json(read_json_file(testing::fixture_path("tagging/worked_example.json")));
  EXPECT_DOUBLE_EQ(evaluate_accuracy(gold, {r}).accuracy, 1.0);
  auto one_feature = r;
  one_feature.changes.pop_back();
  EXPECT_DOUBLE_EQ(evaluate_accuracy(gold, {one_feature}).accuracy, 0.5);
  EXPECT_DOUBLE_EQ(oracle::matcher_accuracy(gold, {one_feature}), 0.5);
}

TEST(TagParser, ToleratesWrappingAndBadTuples) {
  Diagnostics diag;
  const auto r = parse_tag_result(
      "Sure! {not json} Here you go:\n```json\n"
      R"({"aave sentence": "He finna go {now}", "SAE Translation": "He is about to go {now}",
          "changes": [["finna", "is about to", "NEW - Finna as Future", "Syntax"],
                      ["he", "he", "Copula Deletion", "syntax"],
                      ["only three"],
                      [1, 2, 3, 4],
                      ["zzz", "z", "TH-Stopping", "vibes"]]})"
      "\n```\nHope that helps.",
      &diag);
  EXPECT_EQ(r.aave_sentence, "He finna go {now}");
  ASSERT_EQ(r.changes.size(), 2u);
  EXPECT_TRUE(r.changes[0].is_new);
  EXPECT_EQ(r.changes[0].feature_label, "Finna as Future");
  EXPECT_EQ(r.changes[1].category, Category::other);
  EXPECT_FALSE(r.changes[1].span_found);
  EXPECT_GE(diag.size(), 5u);
}

TEST(TagParser, MissingObjectOrKeysThrow) {
  EXPECT_THROW(parse_tag_result("no json here"), ParseError);
  EXPECT_THROW(parse_tag_result(R"({"AAVE sentence": "x", "Changes": []})"), ParseError);
  EXPECT_THROW(parse_tag_result(R"({"AAVE sentence": "x", "SAE translation": "y", "Changes": {}})"), ParseError);
}

TEST(Taxonomy, CategoryFolding) {
  EXPECT_EQ(parse_category("Phonetics"), Category::phonology);
  EXPECT_EQ(parse_category("phonological"), Category::phonology);
  EXPECT_EQ(parse_category(" Morphological "), Category::morphology);
  EXPECT_EQ(parse_category("SYNTAX"), Category::syntax);
  EXPECT_EQ(parse_category("semantic"), Category::semantics);
  Diagnostics diag;
  EXPECT_EQ(parse_category("Lexical", &diag), Category::semantics);
  EXPECT_TRUE(diag.empty());
  EXPECT_EQ(parse_category("pragmatics", &diag), Category::other);
  EXPECT_FALSE(diag.empty());
}

TEST(Taxonomy, StandardListIsLargeEnoughAndRoundTrips) {
  const auto t = FeatureTaxonomy::standard();
  EXPECT_GE(t.size(), kMinTaxonomyEntries);
  EXPECT_NE(t.find("Habitual \"be\""), nullptr);
  EXPECT_EQ(FeatureTaxonomy::from_json(t.to_json()).to_json(), t.to_json());
  EXPECT_THROW(FeatureTaxonomy({{"A", "x"}, {"A", "y"}}), ValidationError);
}

TEST(TaggingPrompt, ListsFeaturesAndEndsWithSentence) {
  const auto t = FeatureTaxonomy::standard();
  const auto p = build_tagging_prompt("They was there.", t);
  EXPECT_TRUE(p.ends_with("AAVE Sentence: They was there."));
  for (const auto& e : t.entries()) EXPECT_NE(p.find("* " + e.name + ": "), std::string::npos) << e.name;
  EXPECT_NE(p.find("\"NEW - <feature>\""), std::string::npos);
  EXPECT_THROW(build_tagging_prompt("  ", t), ValidationError);
}

TEST(TagResponse, TagsSentenceBySentenceAndMerges) {
  auto transport = std::make_unique<testing::ScriptedTransport>(std::deque<llm::HttpResponse>{
      testing::completion_response(
          R"({"AAVE sentence":"They was here.","SAE translation":"They were here.","Changes":[["They was","They were","Invariant \"was\"","Morphology"]]})"),
      testing::completion_response("garbage"),
      testing::completion_response(
          R"({"AAVE sentence":"He be working.","SAE translation":"He is usually working.","Changes":[["He be","He is usually","Habitual \"be\"","Syntax"]]})")});
  auto* raw = transport.get();
  llm::ProviderConfig c;
  c.api_base = "http://x.invalid";
  c.model_id = "tagger";
  llm::ChatClient client(llm::Mode::live, c, nullptr, std::move(transport));
  Diagnostics diag;
  const auto r = tag_response("They was here. Dr. Smith left. He be working.", FeatureTaxonomy::standard(), client,
                              &diag);
  EXPECT_EQ(raw->calls(), 3u);
  ASSERT_EQ(r.changes.size(), 2u);
  EXPECT_EQ(r.aave_sentence, "They was here. Dr. Smith left. He be working.");
  EXPECT_TRUE(r.changes[0].span_found && r.changes[1].span_found);
  EXPECT_TRUE(diag.contains("no changes recorded"));
}

TEST(Accuracy, PerfectPredictionsScoreOne) {
  const auto gold = gold_examples();
  std::vector<TagResult> preds;
  for (const auto& g : gold) {
    TagResult r;
    r.aave_sentence = g.text;
    for (const auto& l : g.labels) r.changes.push_back({l.span, l.span + " (SAE)", l.feature, l.category});
    preds.push_back(r);
  }
  const auto report = evaluate_accuracy(gold, preds);
  EXPECT_EQ(report.total_labels, 8u);
  EXPECT_EQ(report.identified, 8u);
  EXPECT_DOUBLE_EQ(report.accuracy, 1.0);
  EXPECT_EQ(report.false_positives, 0u);
  EXPECT_DOUBLE_EQ(oracle::matcher_accuracy(gold, preds), 1.0);
}

TEST(Accuracy, HalfMatchFixture) {
  const auto gold = gold_examples();
  const auto preds = predictions_from("tagging/half_match_predictions.json");
  const auto report = evaluate_accuracy(gold, preds);
  EXPECT_DOUBLE_EQ(oracle::matcher_accuracy(gold, preds), 0.5);
  EXPECT_DOUBLE_EQ(report.accuracy, 0.5);
  EXPECT_EQ(report.identified, 4u);
  EXPECT_EQ(report.false_positives, 3u);
  EXPECT_EQ(report.per_category.at(Category::syntax).total, 4u);
  EXPECT_EQ(report.per_category.at(Category::syntax).identified, 0u);
  EXPECT_EQ(report.per_category.at(Category::morphology).identified, 3u);
}

TEST(Accuracy, MatcherRules) {
  const GoldLabel g{"you gon laugh", "Omission of \"be\"", Category::syntax};
  EXPECT_TRUE(identifies({"gon", "are going to", "omission of BE", Category::syntax}, g));
  EXPECT_TRUE(identifies({"Laugh!", "", "Omission of 'be'", Category::other}, g));
  EXPECT_FALSE(identifies({"gonna", "", "Omission of \"be\"", Category::syntax}, g));
  EXPECT_FALSE(identifies({"you gon", "", "Go-based Future Tense", Category::syntax}, g));
  EXPECT_EQ(normalize_feature_label("  Inflectional  Ending \"ing\" "), "inflectional ending ing");
  EXPECT_EQ(span_tokens("\"Runnin',\" fast."), (std::vector<std::string>{"runnin'", "fast"}));
}

TEST(Accuracy, AgreesWithOracleAndIsMonotone) {
  // Adding a prediction never lowers the identification rate.
  const auto gold = gold_examples();
  SeededRng rng(17);
  const std::vector<std::string> labels = {"Habitual \"be\"", "Invariant \"was\"", "Go-based Future Tense",
                                           "Unmarked Adverbs", "Omission of \"be\"", "Invariant Present Tense",
                                           "Inflectional Ending \"ing\"", "TH-Stopping"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TagResult> preds(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) preds[i].aave_sentence = gold[i].text;
    double last = evaluate_accuracy(gold, preds).accuracy;
    EXPECT_DOUBLE_EQ(last, 0.0);
    for (int step = 0; step < 12; ++step) {
      const auto i = rng.uniform_below(gold.size());
      const auto words = span_tokens(gold[i].text);
      Change c{words[rng.uniform_below(words.size())], "x", labels[rng.uniform_below(labels.size())],
               Category::syntax};
      preds[i].changes.push_back(c);
      const auto report = evaluate_accuracy(gold, preds);
      EXPECT_GE(report.accuracy, last);
      EXPECT_DOUBLE_EQ(report.accuracy, oracle::matcher_accuracy(gold, preds));
      last = report.accuracy;
    }
  }
}

TEST(Accuracy, GoldValidation) {
  EXPECT_THROW(gold_from_json(json::parse(R"([{"text":"abc","labels":[{"span":"xyz","feature":"f","category":"syntax"}]}])")),
               ValidationError);
  const auto gold = gold_examples();
  EXPECT_EQ(gold_from_json(gold_to_json(gold)).size(), gold.size());
  EXPECT_THROW(evaluate_accuracy(gold, {}), ValidationError);
  EXPECT_DOUBLE_EQ(evaluate_accuracy({}, {}).accuracy, 1.0);
}

std::vector<TaggedTurn> random_tagged(SeededRng& rng, std::size_t turns) {
  std::vector<TaggedTurn> out;
  const std::vector<std::string> bots = {"gpt:low", "gpt:high", "claude:medium"};
  for (std::size_t i = 0; i < turns; ++i) {
    TaggedTurn t;
    t.chatbot_id = bots[rng.uniform_below(bots.size())];
    t.turn_id = "d" + std::to_string(i);
    const auto n = rng.uniform_below(5);
    for (std::uint64_t k = 0; k < n; ++k) {
      t.result.changes.push_back({"a", "b", "f", kAllCategories[rng.uniform_below(std::size(kAllCategories))]});
    }
    out.push_back(t);
  }
  return out;
}

void expect_rates_match_oracle(const std::vector<TaggedTurn>& tagged) {
  const auto rows = per_turn_feature_rates(tagged);
  const auto expected = oracle::feature_rates(tagged);
  ASSERT_EQ(rows.size(), expected.size());
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.chatbot_id, std::string(to_string(row.category)));
    ASSERT_TRUE(expected.contains(key));
    EXPECT_EQ(row.rate, expected.at(key)) << row.chatbot_id << " " << key.second;
    EXPECT_EQ(row.rate, static_cast<double>(row.changes) / static_cast<double>(row.turns));
  }
}

TEST(FeatureRates, MatchBruteForceOracle) {
  SeededRng rng(99);
  for (std::size_t n = 1; n <= 50; ++n) expect_rates_match_oracle(random_tagged(rng, n));
}

TEST(FeatureRates, ZeroChangeTurnsCountAndDuplicatesThrow) {
  std::vector<TaggedTurn> tagged = {{"b", "t1", {}}, {"b", "t2", {}}};
  tagged[0].result.changes.push_back({"x", "y", "f", Category::syntax});
  const auto rows = per_turn_feature_rates(tagged);
  ASSERT_EQ(rows.size(), std::size(kAllCategories));
  for (const auto& r : rows) {
    EXPECT_EQ(r.turns, 2u);
    EXPECT_DOUBLE_EQ(r.rate, r.category == Category::syntax ? 0.5 : 0.0);
  }
  tagged.push_back({"b", "t1", {}});
  EXPECT_THROW(per_turn_feature_rates(tagged), ValidationError);
}

TEST(StratifiedHalf, SizeAndPerStratumShare) {
  SeededRng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<StratumKey> items;
    const auto n = rng.uniform_below(60);
    for (std::uint64_t i = 0; i < n; ++i) {
      items.push_back({"bot" + std::to_string(rng.uniform_below(3)), "dom" + std::to_string(rng.uniform_below(4))});
    }
    const auto picked = stratified_half_sample(items, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(picked.size(), items.size() / 2);
    EXPECT_TRUE(std::is_sorted(picked.begin(), picked.end()));
    EXPECT_EQ(std::set<std::size_t>(picked.begin(), picked.end()).size(), picked.size());
    std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> strata;
    for (const auto& it : items) ++strata[{it.chatbot_id, it.domain}].first;
    for (auto i : picked) ++strata[{items[i].chatbot_id, items[i].domain}].second;
    for (const auto& [key, counts] : strata) {
      EXPECT_GE(counts.second, counts.first / 2);
      EXPECT_LE(counts.second, (counts.first + 1) / 2);
    }
    EXPECT_EQ(picked, stratified_half_sample(items, static_cast<std::uint64_t>(trial)));
  }
}

}  // namespace
}  // namespace aaechat::tagger

#include "aaechat/tagger/tagger.hpp"

#include "aaechat/common/errors.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/speech/sentences.hpp"

namespace aaechat::tagger {
namespace {

constexpr std::string_view kHeader =
    "Here is a list of some of the linguistic features in the African American Vernacular English "
    "dialect, with a short description for each.\n"
    "\n"
    "# AAVE Linguistic Features List\n";

constexpr std::string_view kInstructions =
    "\n"
    "You will see a sentence below that is in the African American Vernacular English dialect.\n"
    "You are helping to analyze the differences between AAVE and Standard American English "
    "sentences.\n"
    "Please perform the following steps in order:\n"
    "(1) Translate the AAVE sentence into Standard American English.\n"
    "(2) Identify all linguistic changes between the AAVE sentence and the SAE translation.\n"
    "(3) Label each change with the appropriate AAVE linguistic feature from the list above. If "
    "there is no matching linguistic feature for the identified change, then propose the new feature "
    "as \"NEW - <feature>\" as the label.\n"
    "(4) Label each change with the appropriate linguistic category representing the change "
    "(phonetics, morphology, syntax, semantics, etc.).\n"
    "\n"
    "Remember, you should never output a change if the category is none or no change. If the text "
    "is the same, then it is not a change and you should not output it.\n"
    "If there are multiple features to the linguistic change, then break down the change into its "
    "parts and assign each the appropriate category.\n"
    "For example, \"She only has three dolluh\" (She only has three dollars) has one linguistic "
    "change \"three dolluh\" with two features to it: Plural Marker s (morphology) and Phonological "
    "Reduction (phonetics).\n"
    "If there are no AAVE features in the sentence, then output an empty list of changes.\n"
    "\n"
    "Your output should be a JSON format as follows:\n"
    "{\n"
    "    \"AAVE sentence\" : \"original AAVE sentence\",\n"
    "    \"SAE translation\" : \"translated AAVE to SAE sentence from step (1)\",\n"
    "    \"Changes\" : [\n"
    "        [AAVE phrase, SAE phrase, AAVE feature from list, category of change],\n"
    "        [AAVE phrase, SAE phrase, NEW - new AAVE feature not in list, category of change]\n"
    "        ...\n"
    "    ]\n"
    "}\n"
    "\n"
    "AAVE Sentence: ";

}  // namespace

std::string_view tagging_template() { return kInstructions; }

std::string build_tagging_prompt(std::string_view sentence, const FeatureTaxonomy& taxonomy) {
  if (text::trim(sentence).empty()) throw ValidationError("cannot tag an empty sentence");
  std::string out(kHeader);
  for (const auto& e : taxonomy.entries()) {
    out += "* " + e.name + ": " + e.description + "\n";
  }
  out += kInstructions;
  out += sentence;
  return out;
}

TagResult tag_response(std::string_view text_in, const FeatureTaxonomy& taxonomy, llm::ChatClient& client,
                       Diagnostics* diag) {
  TagResult merged;
  merged.aave_sentence = std::string(text::trim(text_in));
  std::vector<std::string> translations;
  for (const auto& sentence : speech::split_sentences(text_in)) {
    const auto raw = client.complete(client.make_request(build_tagging_prompt(sentence, taxonomy)));
    try {
      auto part = parse_tag_result(raw, diag);
      translations.push_back(part.sae_translation);
      for (auto& c : part.changes) merged.changes.push_back(std::move(c));
    } catch (const std::exception& e) {
      warn(diag, "tagging '" + std::string(text::utf8_prefix(sentence, 60)) + "': " + e.what() +
                     "; no changes recorded");
      translations.push_back(sentence);
    }
  }
  merged.sae_translation = text::join(translations, " ");
  mark_spans(merged);
  return merged;
}

}  // namespace aaechat::tagger

#include "aaechat/dialect/dialect.hpp"

#include "aaechat/common/text.hpp"

namespace aaechat::dialect {
namespace {

constexpr std::string_view kTemplate =
    "Your task is to modify the last System response in the given conversation, which is "
    "indicated with a double-star (**), so that it is consistent with the following persona:\n"
    "\n"
    "# Persona\n"
    "- Speaking Style: {translation_instruction}\n"
    "- Age: {age}\n"
    "- Gender: {gender}\n"
    "\n"
    "Do not repeat the same discourse marker (ayo, aight, ayy, alright, listen here, etc.), "
    "affectionate terms (honey, sweetie, sugar, baby, sister, chile, boy, brother, man, dude, "
    "etc.), or tag questions (ya feel me, you know, ya dig, etc.) if they exist in the last few "
    "turns of the conversation history.\n"
    "Avoid using a large amount of discourse markers, affectionate terms that are too informal "
    "like baby, direct forms of address like names, and tag questions when considering what has "
    "been said in the conversation history.\n"
    "The content of the original response and the modified response must be the same; only the "
    "way of saying the content should change.\n"
    "\n"
    "Here is the conversation:\n"
    "\n"
    "{dialogue_history}\n"
    "\n"
    "Output only the modified System response.\n"
    "\n"
    "Modified:";

void replace_slot(std::string& s, std::string_view slot, std::string_view value) {
  auto pos = s.find(slot);
  if (pos != std::string::npos) s.replace(pos, slot.size(), value);
}

std::string_view strip_prefix_icase(std::string_view s, std::string_view prefix) {
  return text::starts_with_icase(s, prefix) ? text::trim(s.substr(prefix.size())) : s;
}

}  // namespace

std::string_view to_string(DialectLevel level) {
  switch (level) {
    case DialectLevel::sae:
      return "SAE";
    case DialectLevel::low:
      return "Low";
    case DialectLevel::medium:
      return "Medium";
    case DialectLevel::high:
      return "High";
  }
  return "?";
}

DialectLevel level_from_string(std::string_view name) {
  const auto folded = text::fold_label(name);
  for (auto level : kAllLevels) {
    if (folded == text::to_lower(to_string(level))) return level;
  }
  throw ValidationError("unknown dialect level: " + std::string(name));
}

std::string_view translation_instruction(DialectLevel level) {
  switch (level) {
    case DialectLevel::sae:
      return "Speech is in Standard American English.";
    case DialectLevel::low:
      return "Speech contains some African American Vernacular English usage, but stays close to "
             "Standard American English.";
    case DialectLevel::medium:
      return "Speech contains a mixture of African American Vernacular English and Standard "
             "American English.";
    case DialectLevel::high:
      return "Speech contains heavy African American Vernacular English usage, making them "
             "difficult to understand by those who are unfamiliar with AAE.";
  }
  return {};
}

Persona Persona::for_level(DialectLevel level) {
  Persona p;
  p.speaking_style = std::string(translation_instruction(level));
  return p;
}

std::string_view translation_template() { return kTemplate; }

std::string render_history(std::span<const HistoryLine> history, int target_index) {
  std::string out;
  for (int i = 0; i <= target_index; ++i) {
    const auto& line = history[static_cast<std::size_t>(i)];
    std::string rendered = (line.side == corpus::Side::chatbot ? "System: " : "User: ") + line.text;
    if (i == target_index) rendered = "**" + rendered + "**";
    if (i > 0) out += '\n';
    out += rendered;
  }
  return out;
}

TranslationPrompt build_translation_prompt(std::span<const HistoryLine> history, int target_index,
                                           const Persona& persona) {
  if (target_index < 0 || static_cast<std::size_t>(target_index) >= history.size()) {
    throw ValidationError("target index " + std::to_string(target_index) + " outside history of " +
                          std::to_string(history.size()) + " turns");
  }
  const auto& target = history[static_cast<std::size_t>(target_index)];
  if (target.side != corpus::Side::chatbot) {
    throw ValidationError("target turn " + std::to_string(target_index) + " is not a chatbot turn");
  }
  std::string rendered(kTemplate);
  replace_slot(rendered, "{translation_instruction}", persona.speaking_style);
  replace_slot(rendered, "{age}", persona.age);
  replace_slot(rendered, "{gender}", persona.gender);
  // History goes in last so slot-like text inside turns is never substituted.
  replace_slot(rendered, "{dialogue_history}", render_history(history, target_index));
  return TranslationPrompt{std::move(rendered), target_index, target.text};
}

TranslationPrompt build_translation_prompt(std::span<const HistoryLine> history, int target_index,
                                           DialectLevel level) {
  return build_translation_prompt(history, target_index, Persona::for_level(level));
}

std::string clean_model_output(std::string_view raw) {
  std::string_view s = text::trim(raw);
  s = strip_prefix_icase(s, "Modified:");
  s = strip_prefix_icase(s, "System:");
  if (s.size() >= 4 && s.starts_with("**") && s.ends_with("**")) {
    s = text::trim(s.substr(2, s.size() - 4));
    s = strip_prefix_icase(s, "System:");
  }
  // Wrapping quotes: ASCII, or U+201C ... U+201D.
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = text::trim(s.substr(1, s.size() - 2));
  } else if (s.starts_with("\xE2\x80\x9C") && s.ends_with("\xE2\x80\x9D") && s.size() >= 6) {
    s = text::trim(s.substr(3, s.size() - 6));
  }
  return std::string(s);
}

std::string translate_turn(const TranslationPrompt& prompt, llm::ChatClient& client, Diagnostics* diag) {
  auto raw = client.complete(client.make_request(prompt.rendered_text));
  auto cleaned = clean_model_output(raw);
  if (cleaned.empty()) {
    throw Error("empty model output for turn " + std::to_string(prompt.target_turn_index));
  }
  if (!prompt.source_text.empty() && cleaned.size() > kReviewLengthRatio * prompt.source_text.size()) {
    warn(diag, "turn " + std::to_string(prompt.target_turn_index) + ": output is " +
                   std::to_string(cleaned.size()) + " bytes for a " + std::to_string(prompt.source_text.size()) +
                   "-byte source; flagged for review");
  }
  return cleaned;
}

corpus::Dialogue translate_dialogue(const corpus::Dialogue& dialogue, DialectLevel level,
                                    llm::ChatClient& client, const TranslateOptions& options,
                                    Diagnostics* diag) {
  std::vector<HistoryLine> history;
  for (const auto& t : dialogue.turns) {
    if (t.side == corpus::Side::unassigned) {
      throw ValidationError("dialogue '" + dialogue.id + "' has unassigned turn sides");
    }
    history.push_back({t.side, t.text});
  }
  corpus::Dialogue out = dialogue;
  const auto persona = Persona::for_level(level);
  for (std::size_t i = 0; i < out.turns.size(); ++i) {
    if (out.turns[i].side != corpus::Side::chatbot) continue;
    const auto prompt = build_translation_prompt(history, static_cast<int>(i), persona);
    std::string translated;
    try {
      translated = translate_turn(prompt, client, diag);
    } catch (const Error& e) {
      warn(diag, "dialogue '" + dialogue.id + "': aborted at turn " + std::to_string(i));
      throw TranslationError("dialogue '" + dialogue.id + "' turn " + std::to_string(i) + ": " + e.what(),
                             out, static_cast<int>(i));
    }
    out.turns[i].text = translated;
    if (options.history == HistorySource::translated) history[i].text = translated;
  }
  return out;
}

}  // namespace aaechat::dialect

#include "fake_provider.hpp"

#include <cctype>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/hashing.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/dialect/dialect.hpp"
#include "aaechat/speech/wav.hpp"

namespace aaechat::fixturegen {
namespace {

using nlohmann::json;

struct Rule {
  std::string_view from;
  std::string_view to;
  int min_level;
  int max_level;
};

// Applied in order; each rewrites whole words only.
constexpr Rule kRules[] = {
    {"I'm", "I am", 0, 0},
    {"don't", "do not", 0, 0},
    {"can't", "cannot", 0, 0},
    {"it's", "it is", 0, 0},
    {"you're", "you are", 0, 0},
    {"that's", "that is", 0, 0},
    {"going to", "gonna", 1, 3},
    {"want to", "wanna", 1, 3},
    {"trying", "tryin'", 1, 3},
    {"doing", "doin'", 1, 3},
    {"looking", "lookin'", 1, 3},
    {"getting", "gettin'", 1, 3},
    {"isn't", "ain't", 2, 3},
    {"is not", "ain't", 2, 3},
    {"aren't", "ain't", 2, 3},
    {"let me", "lemme", 2, 3},
    {"kind of", "kinda", 2, 3},
    {"about", "'bout", 2, 3},
    {"because", "'cause", 2, 3},
    {"the", "da", 3, 3},
    {"this", "dis", 3, 3},
    {"that", "dat", 3, 3},
    {"them", "dem", 3, 3},
    {"with", "wit", 3, 3},
    {"for", "fo'", 3, 3},
    {"just", "jus'", 3, 3},
    {"your", "yo'", 3, 3},
};

constexpr std::string_view kOpeners[] = {"", "Alright, ", "Aight, ", "Aight now, "};

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '\''; }

bool boundary_at(std::string_view s, std::size_t pos, std::size_t len) {
  const bool left = pos == 0 || !word_char(s[pos - 1]);
  const bool right = pos + len >= s.size() || !word_char(s[pos + len]);
  return left && right;
}

// Case-insensitive whole-word replacement keeping an initial capital.
std::string replace_words(std::string_view s, std::string_view from, std::string_view to) {
  std::string out;
  const auto lower = text::to_lower(s);
  const auto needle = text::to_lower(from);
  std::size_t i = 0;
  while (i < s.size()) {
    const auto pos = lower.find(needle, i);
    if (pos == std::string::npos) break;
    if (!boundary_at(s, pos, needle.size())) {
      out.append(s.substr(i, pos + 1 - i));
      i = pos + 1;
      continue;
    }
    out.append(s.substr(i, pos - i));
    std::string repl(to);
    if (std::isupper(static_cast<unsigned char>(s[pos])) && !repl.empty() &&
        std::islower(static_cast<unsigned char>(repl[0]))) {
      repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
    } else if (std::isupper(static_cast<unsigned char>(s[pos])) && repl.size() > 1 && repl[0] == '\'') {
      repl[1] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[1])));
    }
    out += repl;
    i = pos + needle.size();
  }
  out.append(s.substr(std::min(i, s.size())));
  return out;
}

int level_index(std::string_view level) {
  const auto folded = text::to_lower(level);
  if (folded == "low") return 1;
  if (folded == "medium") return 2;
  if (folded == "high") return 3;
  return 0;
}

unsigned variant(std::string_view key, unsigned n) {
  return static_cast<unsigned>(std::stoul(sha256_hex(key).substr(0, 6), nullptr, 16) % n);
}

std::string wrap_translation(const std::string& text) {
  switch (variant(text, 4)) {
    case 1:
      return "Modified: " + text;
    case 2:
      return "**System: " + text + "**";
    case 3:
      return "\"" + text + "\"";
    default:
      return text;
  }
}

struct Detector {
  std::string_view token;
  std::string_view sae;
  std::string_view feature;
  std::string_view category;
};

constexpr Detector kDetectors[] = {
    {"gonna", "going to", "Go-based Future Tense", "Syntax"},
    {"wanna", "want to", "Phonological Reduction", "Phonetics"},
    {"lemme", "let me", "Phonological Reduction", "Phonological"},
    {"kinda", "kind of", "Phonological Reduction", "Phonology"},
    {"ain't", "isn't", "Ain't as Negator", "Syntax"},
    {"tryin'", "trying", "Inflectional Ending \"ing\"", "Phonology"},
    {"doin'", "doing", "Inflectional Ending \"ing\"", "Phonology"},
    {"lookin'", "looking", "Inflectional Ending \"ing\"", "Phonology"},
    {"gettin'", "getting", "Inflectional Ending \"ing\"", "Phonology"},
    {"da", "the", "TH-Stopping", "Phonology"},
    {"dis", "this", "TH-Stopping", "Phonology"},
    {"dat", "that", "TH-Stopping", "Phonology"},
    {"dem", "them", "TH-Stopping", "Phonology"},
    {"wit", "with", "TH-Stopping", "Phonology"},
    {"fo'", "for", "R-Lessness", "Phonology"},
    {"yo'", "your", "R-Lessness", "Phonology"},
    {"jus'", "just", "Final Consonant Deletion", "Phonology"},
    {"'bout", "about", "NEW - Initial Syllable Deletion", "Phonology"},
    {"'cause", "because", "NEW - Initial Syllable Deletion", "Phonology"},
    {"aight", "alright", "AAE Lexical Item", "Lexical"},
};

bool contains_word(std::string_view s, std::string_view word) {
  const auto lower = text::to_lower(s);
  const auto needle = text::to_lower(word);
  for (auto pos = lower.find(needle); pos != std::string::npos; pos = lower.find(needle, pos + 1)) {
    if (boundary_at(s, pos, needle.size())) return true;
  }
  return false;
}

std::string last_star_line(std::string_view prompt) {
  std::string found;
  std::size_t start = 0;
  while (start <= prompt.size()) {
    auto end = prompt.find('\n', start);
    if (end == std::string_view::npos) end = prompt.size();
    const auto line = prompt.substr(start, end - start);
    if (line.size() >= 4 && line.starts_with("**") && line.ends_with("**")) found = std::string(line);
    start = end + 1;
  }
  return found;
}

llm::HttpResponse completion(const std::string& content) {
  json body = {{"id", "fake"},
               {"object", "chat.completion"},
               {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}};
  return {200, {{"Content-Type", "application/json"}}, body.dump()};
}

llm::HttpResponse bad_request(const std::string& why) {
  return {400, {{"Content-Type", "application/json"}}, json{{"error", why}}.dump()};
}

}  // namespace

std::string fake_rewrite(std::string_view text, std::string_view level) {
  const int lv = level_index(level);
  std::string out(text);
  for (const auto& r : kRules) {
    if (lv >= r.min_level && lv <= r.max_level) out = replace_words(out, r.from, r.to);
  }
  if (lv > 0 && out == text) out = std::string(kOpeners[lv]) + out;
  return out;
}

std::string fake_tag_reply(std::string_view sentence) {
  json changes = json::array();
  std::string sae(sentence);
  for (const auto& d : kDetectors) {
    if (!contains_word(sentence, d.token)) continue;
    changes.push_back({std::string(d.token), std::string(d.sae), std::string(d.feature), std::string(d.category)});
    sae = replace_words(sae, d.token, d.sae);
  }
  json reply = {{"AAVE sentence", std::string(sentence)}, {"SAE translation", sae}, {"Changes", changes}};
  switch (variant(sentence, 3)) {
    case 1:
      return "```json\n" + reply.dump(2) + "\n```";
    case 2:
      return "Here is the analysis of the sentence:\n" + reply.dump(2);
    default:
      return reply.dump(2);
  }
}

llm::HttpResponse FakeProvider::post(const llm::HttpRequest& request) {
  ++calls_;
  json body;
  try {
    body = json::parse(request.body);
  } catch (const json::exception&) {
    return bad_request("body is not JSON");
  }
  if (request.url.ends_with("/synthesize")) {
    const auto text = body.value("text", "");
    const auto words = text::word_count(text);
    speech::PcmAudio audio;
    audio.sample_rate = 8000;
    audio.samples.resize(std::max<std::size_t>(words, 1) * 800);
    for (std::size_t i = 0; i < audio.samples.size(); ++i) audio.samples[i] = (i / 20) % 2 ? 2000 : -2000;
    const auto wav = speech::encode_wav(audio);
    return {200, {{"Content-Type", "audio/wav"}}, std::string(wav.begin(), wav.end())};
  }
  if (!body.contains("messages") || body["messages"].empty()) return bad_request("no messages");
  const auto prompt = body["messages"].back().value("content", "");

  if (prompt.find("# Persona") != std::string::npos) {
    std::string level = "SAE";
    for (auto lv : dialect::kAllLevels) {
      if (prompt.find(dialect::translation_instruction(lv)) != std::string::npos) level = dialect::to_string(lv);
    }
    auto target = last_star_line(prompt);
    if (target.empty()) return bad_request("no starred target turn");
    std::string_view t(target);
    t = t.substr(2, t.size() - 4);
    if (t.starts_with("System: ")) t.remove_prefix(8);
    return completion(wrap_translation(fake_rewrite(t, level)));
  }
  if (auto pos = prompt.rfind("AAVE Sentence: "); pos != std::string::npos) {
    return completion(fake_tag_reply(text::trim(std::string_view(prompt).substr(pos + 15))));
  }
  return bad_request("unrecognized prompt");
}

}  // namespace aaechat::fixturegen

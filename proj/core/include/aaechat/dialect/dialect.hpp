#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "aaechat/common/diagnostics.hpp"
#include "aaechat/common/errors.hpp"
#include "aaechat/corpus/corpus.hpp"
#include "aaechat/llm/chat_client.hpp"

namespace aaechat::dialect {

/// Dialect intensity, ordered SAE < Low < Medium < High.
enum class DialectLevel { sae, low, medium, high };

inline constexpr std::array<DialectLevel, 4> kAllLevels = {DialectLevel::sae, DialectLevel::low,
                                                           DialectLevel::medium, DialectLevel::high};

/// "SAE", "Low", "Medium", "High".
std::string_view to_string(DialectLevel level);
/// Case-insensitive; throws ValidationError for anything else.
DialectLevel level_from_string(std::string_view name);

/// The speaking-style instruction substituted into the translation prompt.
std::string_view translation_instruction(DialectLevel level);

struct Persona {
  std::string speaking_style;
  std::string age = "Middle-aged";
  std::string gender = "Female";

  static Persona for_level(DialectLevel level);
};

struct HistoryLine {
  corpus::Side side = corpus::Side::user;
  std::string text;
};

struct TranslationPrompt {
  std::string rendered_text;
  int target_turn_index = 0;
  /// The chatbot text being rewritten; used for output sanity checks.
  std::string source_text;
};

/// The template with {translation_instruction} and {dialogue_history} slots.
std::string_view translation_template();

/// "User:" / "System:" lines for turns [0, target_index]; the target line is
/// wrapped in double stars.
std::string render_history(std::span<const HistoryLine> history, int target_index);

TranslationPrompt build_translation_prompt(std::span<const HistoryLine> history, int target_index,
                                           const Persona& persona);
TranslationPrompt build_translation_prompt(std::span<const HistoryLine> history, int target_index,
                                           DialectLevel level);

/// Strips a leading "Modified:" label, wrapping quotes or double stars, and
/// surrounding whitespace.
std::string clean_model_output(std::string_view raw);

/// Outputs more than this many times the source length are flagged.
inline constexpr std::size_t kReviewLengthRatio = 4;

/// Sends the prompt and returns the cleaned rewrite. Throws Error on empty
/// output; overlong output is reported through `diag` and returned.
std::string translate_turn(const TranslationPrompt& prompt, llm::ChatClient& client,
                           Diagnostics* diag = nullptr);

enum class HistorySource {
  translated,  // earlier chatbot turns appear as already rewritten
  original,    // earlier chatbot turns appear as in the source corpus
};

struct TranslateOptions {
  HistorySource history = HistorySource::translated;
};

class TranslationError : public Error {
 public:
  TranslationError(const std::string& what, corpus::Dialogue partial, int failed_turn)
      : Error(what), partial_(std::move(partial)), failed_turn_(failed_turn) {}
  /// The dialogue with every chatbot turn before failed_turn() rewritten.
  const corpus::Dialogue& partial() const { return partial_; }
  int failed_turn() const { return failed_turn_; }

 private:
  corpus::Dialogue partial_;
  int failed_turn_;
};

/// Rewrites every chatbot turn in order; user turns are copied unchanged.
corpus::Dialogue translate_dialogue(const corpus::Dialogue& dialogue, DialectLevel level,
                                    llm::ChatClient& client, const TranslateOptions& options = {},
                                    Diagnostics* diag = nullptr);

}  // namespace aaechat::dialect

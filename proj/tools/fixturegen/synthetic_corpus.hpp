#pragma once

#include <cstdint>
#include <string>

namespace aaechat::fixturegen {

struct CorpusShape {
  /// Eligible dialogues generated for each domain role list.
  std::size_t per_domain = 24;
  /// Dialogues whose roles match no domain.
  std::size_t off_domain = 15;
  /// Domain dialogues shorter than the sampled turn count.
  std::size_t too_short = 10;
  std::uint64_t seed = 1;
};

/// A SODA-style corpus as JSONL text: one {id, speakers, utterances} record
/// per line, 10-12 alternating turns, domain roles as speaker labels, plus
/// off-domain and short distractors and a few malformed lines. Chatbot turns
/// include currency, percentages, decimals, abbreviations and long
/// multi-sentence replies.
std::string make_synthetic_corpus(const CorpusShape& shape = {});

}  // namespace aaechat::fixturegen

#pragma once

#include <string>
#include <string_view>

#include "aaechat/common/diagnostics.hpp"
#include "aaechat/llm/chat_client.hpp"
#include "aaechat/tagger/tag_result.hpp"
#include "aaechat/tagger/taxonomy.hpp"

namespace aaechat::tagger {

std::string_view tagging_template();

/// Renders the feature list as "* Name: description" lines followed by the
/// instructions, ending with "AAVE Sentence: <sentence>".
std::string build_tagging_prompt(std::string_view sentence, const FeatureTaxonomy& taxonomy);

/// Tags `text` one sentence at a time and merges the results. A sentence
/// whose output cannot be parsed contributes no changes (reported through
/// `diag`); client errors propagate.
TagResult tag_response(std::string_view text, const FeatureTaxonomy& taxonomy, llm::ChatClient& client,
                       Diagnostics* diag = nullptr);

}  // namespace aaechat::tagger

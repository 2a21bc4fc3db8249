#pragma once

#include <atomic>
#include <string>
#include <string_view>

#include "aaechat/llm/transport.hpp"

namespace aaechat::fixturegen {

/// Offline stand-in for the chat-completion and speech services, used to
/// record fixture transcripts and in tests.
///
/// Translation prompts get a rule-based rewrite whose strength follows the
/// requested speaking style; tagging prompts get a JSON tagging result listing
/// the rule-detectable features; /synthesize requests get a short tone WAV.
/// Replies vary their wrapping ("Modified:", stars, quotes, code fences) so
/// the output cleaners are exercised.
class FakeProvider : public llm::HttpTransport {
 public:
  llm::HttpResponse post(const llm::HttpRequest& request) override;

  std::size_t calls() const { return calls_; }

 private:
  std::atomic<std::size_t> calls_{0};
};

/// The rewrite applied to a chatbot turn at a level ("SAE", "Low", "Medium",
/// "High"). Never returns the input unchanged for the AAE levels.
std::string fake_rewrite(std::string_view text, std::string_view level);

/// Tagging reply for one sentence, in the tagging JSON schema.
std::string fake_tag_reply(std::string_view sentence);

}  // namespace aaechat::fixturegen

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/errors.hpp"
#include "aaechat/llm/transcript.hpp"
#include "aaechat/llm/transport.hpp"

namespace aaechat::llm {

enum class Mode { live, record, replay };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

enum class Role { system, user, assistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::user;
  std::string text;
};

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
};

/// Canonical serialization: compact JSON with sorted keys,
/// {"max_tokens":..,"messages":[{"content":..,"role":..}],"model":..,"temperature":..}.
std::string canonical_form(const ChatRequest& request);

/// SHA-256 (lowercase hex) of canonical_form(). Stable across runs and
/// platforms; the transcript key.
std::string fingerprint(const ChatRequest& request);

class ReplayMissError : public Error {
 public:
  explicit ReplayMissError(const std::string& fp)
      : Error("no recorded response for request fingerprint " + fp), fingerprint_(fp) {}
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string fingerprint_;
};

class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, int attempts) : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  /// Injected so tests don't sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Runs `attempt` up to policy.max_attempts times with exponential backoff.
/// Rethrows the last failure wrapped in ProviderError.
std::string with_retries(const RetryPolicy& policy, const std::function<std::string()>& attempt);

struct ProviderConfig {
  std::string api_base;  // e.g. https://api.openai.com/v1
  std::string api_key;
  std::string model_id;
  /// Extra body fields passed through verbatim (beam settings etc.).
  nlohmann::json options = nlohmann::json::object();
  RetryPolicy retry;

  /// LLM_API_KEY, LLM_API_BASE, LLM_MODEL_ID. Unset variables stay empty.
  static ProviderConfig from_env();
};

/// Chat-completion client covering every provider reachable through an
/// OpenAI-style /chat/completions endpoint.
class ChatClient {
 public:
  ChatClient(Mode mode, ProviderConfig config, std::shared_ptr<Transcript> transcript,
             std::unique_ptr<HttpTransport> transport = nullptr);

  /// live: provider output. record: provider output, stored under the request
  /// fingerprint. replay: stored output or ReplayMissError; never touches the
  /// transport.
  std::string complete(const ChatRequest& request);

  /// A request with the configured model and temperature 0.
  ChatRequest make_request(std::string user_text) const;

  Mode mode() const { return mode_; }
  const ProviderConfig& config() const { return config_; }

 private:
  std::string call_provider(const ChatRequest& request);

  Mode mode_;
  ProviderConfig config_;
  std::shared_ptr<Transcript> transcript_;
  std::unique_ptr<HttpTransport> transport_;
};

/// Provider wire format helpers, exposed for tests.
nlohmann::json to_wire(const ChatRequest& request, const nlohmann::json& options);
std::string content_from_wire(const std::string& body);

}  // namespace aaechat::llm

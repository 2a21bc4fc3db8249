#include "aaechat/llm/chat_client.hpp"

#include <cstdlib>
#include <thread>

#include "aaechat/common/hashing.hpp"
#include "aaechat/common/text.hpp"

namespace aaechat::llm {

using nlohmann::json;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::live:
      return "live";
    case Mode::record:
      return "record";
    case Mode::replay:
      return "replay";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  auto folded = text::fold_label(name);
  if (folded == "live") return Mode::live;
  if (folded == "record") return Mode::record;
  if (folded == "replay") return Mode::replay;
  throw ValidationError("unknown LLM mode: " + std::string(name));
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system:
      return "system";
    case Role::user:
      return "user";
    case Role::assistant:
      return "assistant";
  }
  return "?";
}

std::string canonical_form(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"content", m.text}, {"role", to_string(m.role)}});
  }
  // nlohmann::json objects keep keys sorted, so dump() is canonical.
  json doc = {{"max_tokens", request.max_tokens},
              {"messages", messages},
              {"model", request.model_id},
              {"temperature", request.temperature}};
  return doc.dump();
}

std::string fingerprint(const ChatRequest& request) { return sha256_hex(canonical_form(request)); }

std::string with_retries(const RetryPolicy& policy, const std::function<std::string()>& attempt) {
  const int attempts = std::max(1, policy.max_attempts);
  auto backoff = policy.initial_backoff;
  std::string last_error;
  for (int i = 1; i <= attempts; ++i) {
    try {
      return attempt();
    } catch (const std::exception& e) {
      last_error = e.what();
    }
    if (i < attempts) {
      if (policy.sleep) {
        policy.sleep(backoff);
      } else {
        std::this_thread::sleep_for(backoff);
      }
      backoff = std::chrono::milliseconds(
          static_cast<std::chrono::milliseconds::rep>(static_cast<double>(backoff.count()) * policy.multiplier));
    }
  }
  throw ProviderError("provider failed after " + std::to_string(attempts) + " attempts: " + last_error,
                      attempts);
}

ProviderConfig ProviderConfig::from_env() {
  auto get = [](const char* name) {
    const char* v = std::getenv(name);
    return v == nullptr ? std::string() : std::string(v);
  };
  ProviderConfig c;
  c.api_key = get("LLM_API_KEY");
  c.api_base = get("LLM_API_BASE");
  c.model_id = get("LLM_MODEL_ID");
  return c;
}

json to_wire(const ChatRequest& request, const json& options) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.text}});
  }
  json body = options.is_object() ? options : json::object();
  body["model"] = request.model_id;
  body["messages"] = messages;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  return body;
}

std::string content_from_wire(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ParseError(std::string("provider response is not JSON: ") + e.what());
  }
  // OpenAI-style first, then the Anthropic messages shape.
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& choice = doc["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      return choice["message"]["content"].get<std::string>();
    }
  }
  if (doc.contains("content") && doc["content"].is_array()) {
    std::string out;
    for (const auto& block : doc["content"]) {
      if (block.value("type", "") == "text") out += block.value("text", "");
    }
    return out;
  }
  throw ParseError("provider response has no message content");
}

ChatClient::ChatClient(Mode mode, ProviderConfig config, std::shared_ptr<Transcript> transcript,
                       std::unique_ptr<HttpTransport> transport)
    : mode_(mode),
      config_(std::move(config)),
      transcript_(std::move(transcript)),
      transport_(std::move(transport)) {
  if (mode_ != Mode::live && !transcript_) {
    throw ValidationError(std::string(to_string(mode_)) + " mode needs a transcript");
  }
  if (mode_ != Mode::replay) {
    if (config_.api_base.empty()) throw ValidationError("LLM_API_BASE is not set");
    if (!transport_) transport_ = make_http_transport();
  }
}

ChatRequest ChatClient::make_request(std::string user_text) const {
  ChatRequest r;
  r.model_id = config_.model_id;
  r.messages.push_back({Role::user, std::move(user_text)});
  return r;
}

std::string ChatClient::call_provider(const ChatRequest& request) {
  HttpRequest http;
  std::string base = config_.api_base;
  while (!base.empty() && base.back() == '/') base.pop_back();
  http.url = base + "/chat/completions";
  if (!config_.api_key.empty()) http.headers["Authorization"] = "Bearer " + config_.api_key;
  http.body = to_wire(request, config_.options).dump();
  return with_retries(config_.retry, [&] {
    auto res = transport_->post(http);
    if (res.status < 200 || res.status >= 300) {
      throw Error("provider returned HTTP " + std::to_string(res.status));
    }
    return content_from_wire(res.body);
  });
}

std::string ChatClient::complete(const ChatRequest& request) {
  if (request.messages.empty()) throw ValidationError("chat request has no messages");
  if (request.temperature < 0) throw ValidationError("temperature must be >= 0");
  const auto fp = fingerprint(request);
  switch (mode_) {
    case Mode::replay: {
      auto hit = transcript_->find(fp);
      if (!hit) throw ReplayMissError(fp);
      return *hit;
    }
    case Mode::record: {
      auto response = call_provider(request);
      const auto& last = request.messages.back().text;
      json summary = {{"model", request.model_id},
                      {"messages", request.messages.size()},
                      {"last_message_head", std::string(text::utf8_prefix(last, 80))}};
      transcript_->add(fp, std::move(summary), response);
      return response;
    }
    case Mode::live:
      return call_provider(request);
  }
  return {};
}

}  // namespace aaechat::llm

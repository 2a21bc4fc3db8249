#pragma once

#include <map>
#include <memory>
#include <string>

namespace aaechat::llm {

struct HttpRequest {
  std::string url;  // absolute, e.g. https://api.example.com/v1/chat/completions
  std::map<std::string, std::string> headers;
  std::string body;
  std::string content_type = "application/json";
};

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;
  std::string body;
};

/// Network boundary for the LLM and TTS clients. Tests substitute scripted
/// implementations; replay mode never calls it.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;

  /// Throws aaechat::Error on connection failure.
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport (http and https).
std::unique_ptr<HttpTransport> make_http_transport(int timeout_seconds = 120);

}  // namespace aaechat::llm

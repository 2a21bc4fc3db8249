#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "aaechat/llm/transport.hpp"

namespace aaechat::cli {

struct CliEnv {
  /// Builds the HTTP transport for live and record runs; `purpose` is "llm"
  /// or "tts". Defaults to a real HTTP client.
  std::function<std::unique_ptr<llm::HttpTransport>(std::string_view purpose)> transport;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

/// Runs one subcommand. `args` excludes the program name. Returns the process
/// exit status: 0 on success, 1 on validation or runtime failure, 2 on usage
/// errors.
int run_cli(const std::vector<std::string>& args, const CliEnv& env = {});

}  // namespace aaechat::cli

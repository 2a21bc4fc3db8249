#pragma once

#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace aaechat {

// Collects non-fatal warnings (skipped records, flagged outputs, ...).
// Every operation that can emit one takes an optional Diagnostics*; passing
// nullptr discards them.
class Diagnostics {
 public:
  Diagnostics() = default;
  Diagnostics(const Diagnostics& other);
  Diagnostics& operator=(const Diagnostics& other);

  void warn(std::string message);

  std::vector<std::string> messages() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  // True if any message contains `needle`.
  bool contains(std::string_view needle) const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> messages_;
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace aaechat

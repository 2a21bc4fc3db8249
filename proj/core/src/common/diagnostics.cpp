#include "aaechat/common/diagnostics.hpp"

namespace aaechat {

Diagnostics::Diagnostics(const Diagnostics& other) : messages_(other.messages()) {}

Diagnostics& Diagnostics::operator=(const Diagnostics& other) {
  if (this != &other) {
    auto copy = other.messages();
    std::lock_guard lock(mu_);
    messages_ = std::move(copy);
  }
  return *this;
}

void Diagnostics::warn(std::string message) {
  std::lock_guard lock(mu_);
  messages_.push_back(std::move(message));
}

std::vector<std::string> Diagnostics::messages() const {
  std::lock_guard lock(mu_);
  return messages_;
}

std::size_t Diagnostics::size() const {
  std::lock_guard lock(mu_);
  return messages_.size();
}

bool Diagnostics::contains(std::string_view needle) const {
  std::lock_guard lock(mu_);
  for (const auto& m : messages_) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace aaechat

#pragma once

#include <stdexcept>
#include <string>

namespace kedit {

// Invalid configuration: bad field values, missing URLs or API keys.
// CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failure talking to an embedding or generation provider. `retryable`
// distinguishes transport hiccups from contract violations.
class ProviderError : public std::runtime_error {
public:
  ProviderError(const std::string& what, bool retryable)
      : std::runtime_error(what), retryable_(retryable) {}

  bool retryable() const { return retryable_; }

private:
  bool retryable_;
};

} // namespace kedit

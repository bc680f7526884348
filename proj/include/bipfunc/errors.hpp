#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bipfunc {

// Raised when an exact solver refuses an instance that is beyond its size
// guard. Callers map it to a distinct exit status rather than approximating.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the experiment config reader; carries every offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys)
      : std::runtime_error(what), keys_(std::move(keys)) {}

  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

}  // namespace bipfunc

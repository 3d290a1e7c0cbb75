#pragma once

#include <stdexcept>
#include <string>

namespace cobe {

/// A precondition or invariant of an algorithm or environment was violated.
/// The CLI maps this to exit code 3.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// The experiment configuration is malformed or incompatible. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

}  // namespace cobe

#ifndef OFFPOLICY_ERRORS_HPP_
#define OFFPOLICY_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace offpolicy {

/// Invalid parameters, unknown algorithm ids, malformed configuration files.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Unreadable inputs, unwritable outputs, malformed CSV.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace offpolicy

#endif  // OFFPOLICY_ERRORS_HPP_

#pragma once

#include <stdexcept>
#include <string>

namespace uavcov {

// Invalid parameters or malformed config input. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A quadrature, inversion or derivative routine could not reach its tolerance.
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uavcov

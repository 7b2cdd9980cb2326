#pragma once

#include <stdexcept>
#include <string>

namespace mmudn {

/// Rejected argument or malformed input (CLI exit code 1).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Quadrature or root-finding that did not reach its tolerance (CLI exit code 2).
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace mmudn

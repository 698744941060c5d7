#pragma once

#include <stdexcept>
#include <string>

namespace sarinf {

/// Bad input: violated precondition, malformed config, dimension mismatch.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: singular systems, non-finite densities, degenerate weights.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace sarinf

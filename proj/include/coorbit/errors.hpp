#pragma once

#include <stdexcept>
#include <string>

namespace coorbit {

// Bad input: violated precondition, malformed config, wrong flavor.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerics went wrong: singular metric along a path, inconclusive rank.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coorbit

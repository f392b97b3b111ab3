#pragma once

#include <stdexcept>
#include <string>

namespace gbb {

/// Rejected experiment configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive search refused because K^n exceeds the evaluation budget.
/// The CLI maps this to exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The ridge state lost positive definiteness (a corrupted accumulator).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbb

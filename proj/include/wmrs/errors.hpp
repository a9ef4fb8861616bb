#pragma once

#include <stdexcept>
#include <string>

namespace wmrs {

// Invalid construction arguments or malformed input.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive-enumeration request beyond the supported size.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wmrs

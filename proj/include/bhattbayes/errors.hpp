#pragma once

#include <stdexcept>
#include <string>

namespace bhattbayes {

// Precondition violations (bad dimensions, out-of-range counts, invalid
// distributions) are reported as std::invalid_argument. Failures of the
// numerics themselves use the types below.

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceError : public NumericError {
 public:
  explicit ConvergenceError(const std::string& what) : NumericError(what) {}
};

}  // namespace bhattbayes

#pragma once

#include <stdexcept>
#include <string>

namespace qfactor {

// An evaluation or decode was handed an assignment that does not cover a
// variable it needs.
struct MissingVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact integer division was requested but some coefficient is not a
// multiple of the divisor.
struct DivisibilityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exhaustive solver was asked to enumerate more variables than its
// configured cap allows.
struct VariableCountExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A text fixture (polynomial, coupling list, report) failed to parse.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A key = value configuration file is malformed or inconsistent.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qfactor

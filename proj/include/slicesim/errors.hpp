#pragma once

#include <stdexcept>

namespace slicesim {

// Config or argument values that violate a declared precondition.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file content; messages name the offending line where possible.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally valid input that contradicts itself (e.g. duplicate cells).
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke an operation contract (e.g. user placed on an inactive slice).
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure that must surface instead of being silently patched.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slicesim

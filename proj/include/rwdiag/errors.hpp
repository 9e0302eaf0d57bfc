#pragma once

#include <stdexcept>
#include <string>

namespace rwdiag {

// Mixing elements of different families, or acting on an incompatible space.
struct FamilyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scenario / input rejected before any computation starts.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An enumeration or convolution would exceed its configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A boundary point could not be resolved deep enough for the requested evaluation.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rwdiag

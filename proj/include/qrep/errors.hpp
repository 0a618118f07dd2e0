#pragma once

#include <stdexcept>

namespace qrep {

// Bad argument: out-of-range index, invalid parameter, malformed state.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Register would exceed the qubit cap.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

// A requested measurement branch has (numerically) zero probability.
struct DegenerateStateError : std::domain_error {
  using std::domain_error::domain_error;
};

// The requested protocol or search has no feasible outcome.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qrep

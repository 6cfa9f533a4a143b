#pragma once
#include <stdexcept>
#include <string>

namespace gv {

// A computation needed data beyond a declared truncation window or bound.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An over-determined constraint system disagreed with itself.
struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters violate the hypotheses of a construction (e.g. Q_a = Q_b).
struct DegenerateParameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace gv

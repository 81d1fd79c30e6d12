#pragma once

#include <stdexcept>

namespace fegraph {

// Invalid inputs or violated preconditions.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input (edge lists, label files, containers).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values produced during a numeric computation.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fegraph

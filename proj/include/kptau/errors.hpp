#pragma once

#include <stdexcept>
#include <string>

namespace kptau {

// Failure classes; the CLI maps each to a stable exit code.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kptau

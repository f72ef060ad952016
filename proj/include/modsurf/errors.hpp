#pragma once

#include <stdexcept>
#include <string>

namespace modsurf {

// Error taxonomy mirrored by the CLI exit codes:
//   validation_error -> 1, io_error -> 2, convergence_error -> 3.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when exact integer arithmetic would exceed the checked 128-bit range.
struct overflow_error : validation_error {
    explicit overflow_error(const std::string& msg) : validation_error(msg) {}
};

} // namespace modsurf

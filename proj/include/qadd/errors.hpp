#pragma once

#include <stdexcept>
#include <string>

namespace qadd {

// Bad user input or a violated domain invariant. The CLI maps this to exit 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-convergence, unacceptable residue, etc. Exit 1 in the CLI.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear system too ill-conditioned to trust; carries the condition estimate.
struct conditioning_error : numeric_error {
    double condition;
    conditioning_error(const std::string& msg, double cond)
        : numeric_error(msg + " (condition estimate " + std::to_string(cond) + ")"),
          condition(cond) {}
};

} // namespace qadd

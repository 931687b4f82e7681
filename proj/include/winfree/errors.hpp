#pragma once

#include <stdexcept>
#include <string>

namespace winfree {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kernel order outside the supported range (order >= 1, or >= 2 where noted).
struct invalid_order_error : error {
    using error::error;
};

// Scalar argument outside the mathematical domain of an operation.
struct domain_error : error {
    using error::error;
};

// Vector dimensions do not match the model size.
struct shape_error : error {
    using error::error;
};

// Integration produced a non-finite state. Carries the offending time.
struct divergence_error : error {
    divergence_error(double when, const std::string& what)
        : error(what), time(when) {}
    double time;
};

// Rotation-number window is empty after discarding the transient.
struct window_error : error {
    using error::error;
};

// Trace violates the hypotheses of a locking analysis. Carries the first
// offending time.
struct hypotheses_error : error {
    hypotheses_error(double when, const std::string& what)
        : error(what), time(when) {}
    double time;
};

// Malformed or schema-violating run configuration.
struct config_error : error {
    using error::error;
};

}  // namespace winfree

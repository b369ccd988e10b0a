#pragma once

#include <stdexcept>
#include <string>

namespace lgi {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input (non-finite values, malformed ranges, out-of-domain parameters).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Re(M) of a Gaussian exponent failed the Cholesky test; the integral diverges.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// |det M| underflowed the singularity threshold.
class SingularForm : public Error {
public:
    using Error::Error;
};

/// An iterative or adaptive procedure exhausted its budget.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double error_estimate)
        : Error(what + " (error estimate " + std::to_string(error_estimate) + ")"),
          error_estimate_(error_estimate) {}

    [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

/// A squeezed projector was handed to a coherent-only formula.
class InvalidProjector : public Error {
public:
    using Error::Error;
};

}  // namespace lgi

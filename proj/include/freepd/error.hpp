#pragma once

#include <stdexcept>
#include <string>

namespace freepd {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical precondition failed: a matrix or function that should be
/// positive is not, a contraction is too large, a solver did not converge.
class MathError : public Error {
public:
    using Error::Error;
};

/// Positivity failure. `witness` names the offending index set or submatrix.
class NotPositiveError : public MathError {
public:
    NotPositiveError(const std::string& what, std::string witness, double min_eigenvalue)
        : MathError(what), witness_(std::move(witness)), min_eigenvalue_(min_eigenvalue) {}

    const std::string& witness() const noexcept { return witness_; }
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    std::string witness_;
    double min_eigenvalue_;
};

/// Structurally invalid input: wrong dimensions, missing values, malformed
/// files, out-of-range generators.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace freepd

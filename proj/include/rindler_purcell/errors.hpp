#pragma once

#include <stdexcept>
#include <string>

namespace rp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or documented input domain was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to reach its target (series cap, quadrature,
/// root bracketing).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Root scan exhausted its window without finding the requested sign changes.
class BracketingFailure : public NumericalFailure {
public:
    BracketingFailure(const std::string& what, double lo, double hi)
        : NumericalFailure(what + " (scan window [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "])"),
          window_lo(lo), window_hi(hi) {}

    double window_lo;
    double window_hi;
};

} // namespace rp

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace monocrn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed network text. Carries the 1-based line number (0 when the
/// error is not tied to a line, e.g. an empty network).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An operation was called with arguments violating its precondition
/// (length mismatch, negative concentration, state outside the domain, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not reach its goal (integration budget,
/// Newton divergence, missing equilibrium stall).
class NumericalError : public Error {
public:
    using Error::Error;
};

inline void require_size(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) {
        throw PreconditionError(std::string(what) + ": length mismatch (got " + std::to_string(got) +
                                ", expected " + std::to_string(want) + ")");
    }
}

}  // namespace monocrn

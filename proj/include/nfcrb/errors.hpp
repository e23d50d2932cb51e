#pragma once

#include <stdexcept>
#include <string>

namespace nfcrb {

/// Bad input value (non-positive count, spacing, power, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A target sits on (or numerically on) an array element or centroid.
class DegenerateGeometry : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Fisher information (or a nuisance block of it) cannot be inverted.
class SingularFim : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Second-order expansion evaluated where it no longer makes sense (1 + Delta <= 0).
class ApproximationOutOfDomain : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Relative error requested against a zero or non-finite reference.
class UndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace nfcrb

#pragma once

#include <stdexcept>
#include <string>

namespace pbna {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario text (bad token, wrong arity, unknown keyword).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Scenario violates a structural assumption (cycle, sender with
/// incoming edges, missing session, ...).
class ModelViolation : public Error {
public:
    using Error::Error;
};

/// Inverse of zero requested.
class ZeroInverse : public Error {
public:
    ZeroInverse() : Error("inverse of zero in GF(2^m)") {}
};

/// A query needs a directed path that does not exist.
class Disconnected : public Error {
public:
    using Error::Error;
};

/// Symbolic path enumeration exceeds the path-count guard.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// Too many consecutive random draws hit a zero denominator.
class ResampleLimit : public Error {
public:
    using Error::Error;
};

} // namespace pbna

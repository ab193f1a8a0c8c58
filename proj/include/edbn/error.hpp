#ifndef EDBN_ERROR_HPP
#define EDBN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edbn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (k = 0, empty column, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed delimited input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A model or config document could not be read back.
class LoadError : public Error {
public:
    using Error::Error;
};

}  // namespace edbn

#endif

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wildseg {

/// A call was made with arguments violating an operation's preconditions
/// (e.g. a split index outside its interval).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// User-supplied data or parameters are unusable (series too short,
/// unknown signal name, non-finite values).
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reading or parsing an input file failed. `line()` is 1-based, 0 when
/// the failure is not tied to a line.
class IoError : public std::runtime_error {
public:
    IoError(const std::string &what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace wildseg

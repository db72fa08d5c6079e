#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repcause {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated data-model invariant: duplicate tid, arity mismatch, unknown tid.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Input text that does not follow the problem grammar.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Query evaluation failures (open query where a Boolean one is needed,
/// order comparison across constant types).
class EvalError : public Error {
public:
    using Error::Error;
};

/// Requested computation exceeds what exhaustive search can handle.
class LimitError : public Error {
public:
    using Error::Error;
};

/// Invalid combination of program-emission options.
class EmitError : public Error {
public:
    using Error::Error;
};

} // namespace repcause

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace archprog {

/// Base class for every error raised by the toolchain.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text could not be parsed into a Program. Carries a 1-based source location.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column), message_(what) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// A tree handed to tree_to_program is not a rooted forest.
class StructureError : public Error {
public:
    using Error::Error;
};

/// Degenerate or otherwise unusable geometry.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A token stream was rejected by the grammar automaton.
class TokenError : public Error {
public:
    TokenError(std::size_t position, std::vector<int> expected, const std::string& what)
        : Error("token " + std::to_string(position) + ": " + what),
          position_(position), expected_(std::move(expected)) {}

    std::size_t position() const { return position_; }
    /// Token ids that would have been accepted at position().
    const std::vector<int>& expected() const { return expected_; }

private:
    std::size_t position_;
    std::vector<int> expected_;
};

/// Procedural generation exhausted its retry budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace archprog

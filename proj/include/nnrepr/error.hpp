#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nnrepr {

enum class ErrorKind {
    invalid_input,
    invalid_flag,
    invalid_matrix,
    format,
    resource_limit,
    degenerate_function,
    constant_function,
    structural,
};

const char* to_string(ErrorKind kind) noexcept;

// Base of every error thrown by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Parse failure with a 1-based location. Column is a token index for
// whitespace formats and a byte offset for JSON.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line, std::size_t column)
        : Error(ErrorKind::format, what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace nnrepr

#pragma once

#include <stdexcept>
#include <string>

namespace bellshrink {

enum class ErrorKind {
    invalid_input,
    domain,
    numeric_failure,
    not_positive_definite,
    collinearity_failure,
    degenerate_input,
    overflow_guard,
    schema,
    validation,
    cell_failure,
    io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; the kind selects the CLI exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Process exit status for an error kind. 0 is reserved for success.
int exit_code(ErrorKind kind) noexcept;

}  // namespace bellshrink

#include "bellshrink/error.hpp"

namespace bellshrink {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid-input";
        case ErrorKind::domain: return "domain";
        case ErrorKind::numeric_failure: return "numeric-failure";
        case ErrorKind::not_positive_definite: return "not-positive-definite";
        case ErrorKind::collinearity_failure: return "collinearity-failure";
        case ErrorKind::degenerate_input: return "degenerate-input";
        case ErrorKind::overflow_guard: return "overflow-guard";
        case ErrorKind::schema: return "schema";
        case ErrorKind::validation: return "validation";
        case ErrorKind::cell_failure: return "cell-failure";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::schema: return 3;
        case ErrorKind::validation: return 4;
        case ErrorKind::collinearity_failure: return 5;
        case ErrorKind::numeric_failure:
        case ErrorKind::not_positive_definite:
        case ErrorKind::overflow_guard: return 6;
        case ErrorKind::invalid_input:
        case ErrorKind::domain:
        case ErrorKind::degenerate_input: return 7;
        case ErrorKind::io: return 8;
        case ErrorKind::cell_failure: return 9;
    }
    return 1;
}

}  // namespace bellshrink

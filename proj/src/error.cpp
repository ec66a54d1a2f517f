#include "nnrepr/error.hpp"

namespace nnrepr {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid-input";
        case ErrorKind::invalid_flag: return "invalid-flag";
        case ErrorKind::invalid_matrix: return "invalid-matrix";
        case ErrorKind::format: return "format";
        case ErrorKind::resource_limit: return "resource-limit";
        case ErrorKind::degenerate_function: return "degenerate-function";
        case ErrorKind::constant_function: return "constant-function";
        case ErrorKind::structural: return "structural";
    }
    return "unknown";
}

}  // namespace nnrepr

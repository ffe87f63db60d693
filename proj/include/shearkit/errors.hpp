#pragma once

#include <stdexcept>
#include <string>

namespace shearkit {

/// Machine-readable error categories. The CLI maps these onto exit codes and
/// structured error objects.
enum class ErrorKind {
    BackendMismatch,
    ArityMismatch,
    SingularMatrix,
    NonConstantJacobian,
    NotAnAutomorphism,
    Precondition,
    Transcendental,
    InvalidInput,
    Unsupported,
    Internal,
};

const char* to_string(ErrorKind kind);

/// Base exception for every documented failure. `certificate` optionally
/// carries a serialized witness (e.g. a nonzero divergence polynomial as JSON).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string certificate = {})
        : std::runtime_error(message), kind_(kind), certificate_(std::move(certificate)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& certificate() const noexcept { return certificate_; }

private:
    ErrorKind kind_;
    std::string certificate_;
};

}  // namespace shearkit

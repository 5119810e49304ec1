#pragma once

#include <stdexcept>
#include <string>

namespace cope {

// Error taxonomy mirrors the CLI exit codes: validation failures (bad
// config, bad preconditions, malformed requests) exit 1, processing
// failures (corrupt data, infeasible optimization, I/O trouble mid-run)
// exit 2.
enum class ErrorKind {
    validation,
    processing,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::string message)
        : Error(ErrorKind::validation, std::move(message)) {}
};

class ProcessingError : public Error {
public:
    explicit ProcessingError(std::string message)
        : Error(ErrorKind::processing, std::move(message)) {}
};

// Rethrows with a context prefix, keeping the concrete error kind.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& prefix) {
    if (e.kind() == ErrorKind::validation) {
        throw ValidationError(prefix + e.what());
    }
    throw ProcessingError(prefix + e.what());
}

}  // namespace cope

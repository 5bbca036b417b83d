#pragma once

#include <stdexcept>
#include <string>

namespace pwrc {

/// Coarse failure category. The CLI maps each one to a stable exit code.
enum class ErrorKind {
    InvalidInput,  // malformed or inconsistent input data, bad arguments
    Io,            // file could not be opened, read or written
    Degenerate,    // well-formed data on which an indicator is undefined
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& message) {
    throw Error(ErrorKind::InvalidInput, message);
}

[[noreturn]] inline void fail_degenerate(const std::string& message) {
    throw Error(ErrorKind::Degenerate, message);
}

[[noreturn]] inline void fail_io(const std::string& message) {
    throw Error(ErrorKind::Io, message);
}

}  // namespace pwrc

#pragma once

#include <stdexcept>
#include <string>

namespace lf {

// Failure categories surfaced to callers. Each maps to one class of
// contract violation; the message carries the specifics.
enum class ErrorKind {
    schema,
    granularity,
    duplicate,
    unfillable,
    range,
    alignment,
    history,
    coverage,
    shape,
    length,
    singular,
    domain,
    input,
    numeric,
    validation,
    usage,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

}  // namespace lf

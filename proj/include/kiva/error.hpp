#pragma once

#include <stdexcept>
#include <string>

namespace kiva {

enum class ErrorKind {
    invalid_instance,
    invalid_input,
    infeasible,
    limit_exceeded,
};

/// Library-wide exception. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace kiva

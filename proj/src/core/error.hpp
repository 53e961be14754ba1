#pragma once

#include <stdexcept>
#include <string>

namespace crossforge {

// Error taxonomy mirrored by the C API status codes and the CLI exit codes:
// usage/config problems, data problems (parse, schema, bad arguments at run
// time), and internal invariant violations.
enum class ErrorKind {
    Usage,
    Data,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) { return Error(ErrorKind::Usage, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::Data, msg); }
inline Error internal_error(const std::string& msg) { return Error(ErrorKind::Internal, msg); }

} // namespace crossforge

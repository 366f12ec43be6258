#pragma once

#include <stdexcept>
#include <string>

namespace fcz {

enum class ErrorCode {
    InvalidArgument,
    Parse,
    Io,
};

// Every precondition violation in the library surfaces as an fcz::Error.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    explicit Error(const std::string& what)
        : Error(ErrorCode::InvalidArgument, what) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace fcz

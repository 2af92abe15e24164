#pragma once

#include <stdexcept>
#include <string>

namespace perfset {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorClass {
    internal = 1,
    input = 2,
    environment = 3,
    provider = 4,
};

// All recoverable failures carry a machine-readable code ("input.unreadable_file",
// "provider.all_failed", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string code, const std::string& message)
        : std::runtime_error(message), cls_(cls), code_(std::move(code)) {}

    ErrorClass error_class() const { return cls_; }
    const std::string& code() const { return code_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
    std::string code_;
};

inline Error input_error(const std::string& code, const std::string& msg) {
    return Error(ErrorClass::input, "input." + code, msg);
}

inline Error environment_error(const std::string& code, const std::string& msg) {
    return Error(ErrorClass::environment, "environment." + code, msg);
}

inline Error provider_error(const std::string& code, const std::string& msg) {
    return Error(ErrorClass::provider, "provider." + code, msg);
}

inline Error config_error(const std::string& code, const std::string& msg) {
    return Error(ErrorClass::input, "config." + code, msg);
}

}  // namespace perfset

#pragma once

#include <stdexcept>
#include <string>

namespace p300 {

/// Broad failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
    config,   ///< invalid configuration or arguments
    data,     ///< malformed, missing or inconsistent input data
    runtime,  ///< numerical or algorithmic failure during processing
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::data, msg); }
[[noreturn]] inline void throw_runtime(const std::string& msg) { throw Error(ErrorKind::runtime, msg); }

}  // namespace p300

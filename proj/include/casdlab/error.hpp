#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace casdlab {

/// Error with a stable machine-readable code alongside the human message.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace casdlab

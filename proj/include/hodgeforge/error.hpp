#pragma once

#include <stdexcept>
#include <string>

namespace hodgeforge {

// Every failure carries a short machine-readable code ("NotNested",
// "D1SquareNonzero", ...) next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace hodgeforge

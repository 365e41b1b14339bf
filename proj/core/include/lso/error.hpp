#pragma once

#include <stdexcept>
#include <string>

namespace lso {

// Every failure the library reports carries a short machine-readable code
// (e.g. "Disconnected", "UnknownNode") plus a human-readable message.
struct Error : std::runtime_error {
    std::string code;

    Error(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

} // namespace lso

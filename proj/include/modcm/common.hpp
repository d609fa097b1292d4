#pragma once

#include <stdexcept>
#include <string>

namespace modcm {

/// Invalid argument or malformed input. CLI maps this to exit code 2.
struct bad_input : std::runtime_error {
    explicit bad_input(const std::string& what) : std::runtime_error(what) {}
};

/// A supported-but-too-large request (enumeration caps). CLI maps this to exit code 3.
struct cap_exceeded : std::runtime_error {
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace modcm

// errors.hpp — Exception types shared by the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace xblockade {

/// Invalid user configuration (unknown key, out-of-range value, bad grid).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or produced an unphysical iterate.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace xblockade

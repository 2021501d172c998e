#pragma once

#include <stdexcept>
#include <string>

namespace cavimag {

/// Invalid user-supplied parameters (mesh sizes, run settings, config values).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physics or bookkeeping precondition was violated at run time.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cavimag

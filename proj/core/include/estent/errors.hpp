#pragma once

#include <stdexcept>
#include <string>

namespace estent {

/// Invalid arguments, dimension mismatches, misconfigured scenarios.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A trajectory produced a non-finite state.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A cover would exceed the configured cardinality cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A channel message that the decoder cannot accept.
class CorruptMessage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace estent

#pragma once

#include <stdexcept>
#include <string>

namespace footfall {

/// Bad argument or violated precondition.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Unsupported or malformed file content.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failed read/write or truncated stream.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Model does not satisfy the requirements for spiking inference.
class ConversionError : public std::runtime_error {
public:
    explicit ConversionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Illegal access in the hardware model (bus error equivalent).
class HardwareFault : public std::logic_error {
public:
    explicit HardwareFault(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace footfall

#pragma once

#include <stdexcept>
#include <string>

namespace gvae {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape or axis disagreement between operands.
struct DimensionError : Error {
    using Error::Error;
};

// Input outside the numerically representable range of an operation.
struct RangeError : Error {
    using Error::Error;
};

// A caller violated a documented precondition.
struct ContractError : Error {
    using Error::Error;
};

// Invalid or inconsistent configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed or truncated file content; carries the byte offset of the failure.
struct FormatError : Error {
    FormatError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte offset " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

// File declares an unsupported format version.
struct VersionError : Error {
    using Error::Error;
};

// Evaluation protocol cannot be satisfied by the given dataset.
struct ProtocolError : Error {
    using Error::Error;
};

// Training produced a non-finite value.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace gvae

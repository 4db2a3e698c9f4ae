#pragma once

#include <stdexcept>
#include <string>

namespace mbs {

// Structured error taxonomy shared by the library and the CLI.  Every
// throwing path uses Error so callers (and the CLI's machine-readable
// stderr channel) can switch on the code instead of parsing messages.
enum class ErrorCode {
    CutoffTooSmall,
    ShapeMismatch,
    ZeroScatteringAmplitude,
    NotNormalizedScattering,
    DegenerateLeadingCoefficient,
    BadBlockIndex,
    CoincidentCoherentAmplitudes,
    IllConditionedGram,
    ZeroCatCoefficient,
    ZeroState,
    TooManyModes,
    TooLarge,
    NotInvertible,
    VerificationFailed,
    IncomparableModes,
    SchemaError,
    InvariantError,
    InvalidArgument,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string location = {})
        : std::runtime_error(message), code_(code), location_(std::move(location)) {}

    ErrorCode code() const { return code_; }
    // JSON-pointer-style location for schema errors; empty otherwise.
    const std::string& location() const { return location_; }

private:
    ErrorCode code_;
    std::string location_;
};

} // namespace mbs

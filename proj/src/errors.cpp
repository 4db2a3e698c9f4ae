#include "mbs/errors.hpp"

namespace mbs {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ZeroScatteringAmplitude: return "ZeroScatteringAmplitude";
        case ErrorCode::NotNormalizedScattering: return "NotNormalizedScattering";
        case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
        case ErrorCode::BadBlockIndex: return "BadBlockIndex";
        case ErrorCode::CoincidentCoherentAmplitudes: return "CoincidentCoherentAmplitudes";
        case ErrorCode::IllConditionedGram: return "IllConditionedGram";
        case ErrorCode::ZeroCatCoefficient: return "ZeroCatCoefficient";
        case ErrorCode::ZeroState: return "ZeroState";
        case ErrorCode::TooManyModes: return "TooManyModes";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NotInvertible: return "NotInvertible";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::IncomparableModes: return "IncomparableModes";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::InvariantError: return "InvariantError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace mbs

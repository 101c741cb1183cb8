#pragma once

#include <stdexcept>
#include <string>

namespace plap {

enum class ErrorCode {
    DuplicateVertex,
    UnknownEndpoint,
    NonPositiveWeight,
    SelfLoop,
    OverlappingSets,
    EmptySet,
    Disconnected,
    DuplicateEdge,
    UnknownVertex,
    DomainError,
    NegativeArgument,
    QuadratureFailure,
    InvariantError,
    GammaTooSmall,
    DegenerateExponent,
    InfeasibleStart,
    InfeasiblePoint,
    ConstructionFailed,
    ScanExhausted,
    MaxIterExceeded,
    DegeneratePath,
    ParseError,
    SchemaError,
    Usage,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvariantError: return "InvariantError";
    case ErrorCode::GammaTooSmall: return "GammaTooSmall";
    case ErrorCode::DegenerateExponent: return "DegenerateExponent";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::ScanExhausted: return "ScanExhausted";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

/// Every failure in the library is an Error carrying a code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace plap

#pragma once

#include <stdexcept>
#include <string>

namespace qvaforge {

enum class ErrorCode {
    DivisionOutsideRing,
    TruncationZero,
    UnknownVariable,
    DisallowedPoleAfterShift,
    UnsupportedFactor,
    InsufficientLowTrunc,
    MissingTableEntry,
    UnsupportedAxiom,
    InconclusiveTruncation,
    SyntaxError,
    DisallowedPole,
    ValidationFailed,
    BadInput,
};

/// Exception carrying a stable error code alongside the message; the CLI maps
/// every code to exit status 2.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DivisionOutsideRing: return "DivisionOutsideRing";
        case ErrorCode::TruncationZero: return "TruncationZero";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::DisallowedPoleAfterShift: return "DisallowedPoleAfterShift";
        case ErrorCode::UnsupportedFactor: return "UnsupportedFactor";
        case ErrorCode::InsufficientLowTrunc: return "InsufficientLowTrunc";
        case ErrorCode::MissingTableEntry: return "MissingTableEntry";
        case ErrorCode::UnsupportedAxiom: return "UnsupportedAxiom";
        case ErrorCode::InconclusiveTruncation: return "InconclusiveTruncation";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::DisallowedPole: return "DisallowedPole";
        case ErrorCode::ValidationFailed: return "ValidationFailed";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, std::string(error_code_name(code)) + ": " + msg);
}

}  // namespace qvaforge

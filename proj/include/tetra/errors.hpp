#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tetra {

enum class ErrorKind {
    InvalidArgument,
    NotAContraction,
    DimensionMismatch,
    NotIsometric,
    NotCommuting,
    TriangularizationFailed,
    EigenSolverFailed,
    FiberMismatch,
    SearchFailed,
    NoFundamentalPair,
    NotPartialIsometry,
    PairingNotIsometric,
    DegreeExceedsProtection,
    LiftNotVerified,
    GenerationFailed,
    ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAContraction: return "NotAContraction";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotIsometric: return "NotIsometric";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::TriangularizationFailed: return "TriangularizationFailed";
    case ErrorKind::EigenSolverFailed: return "EigenSolverFailed";
    case ErrorKind::FiberMismatch: return "FiberMismatch";
    case ErrorKind::SearchFailed: return "SearchFailed";
    case ErrorKind::NoFundamentalPair: return "NoFundamentalPair";
    case ErrorKind::NotPartialIsometry: return "NotPartialIsometry";
    case ErrorKind::PairingNotIsometric: return "PairingNotIsometric";
    case ErrorKind::DegreeExceedsProtection: return "DegreeExceedsProtection";
    case ErrorKind::LiftNotVerified: return "LiftNotVerified";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class TetraError : public std::runtime_error {
public:
    TetraError(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tetra

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptdimer {

enum class ErrorKind {
    InvalidArgument,
    IterationLimit,
    DegenerateModel,
    NonPhysicalState,
    BranchAbsent,
    SingularDenominator,
    DegenerateSpectrum,
    TiedMaximum,
    ZeroNorm,
    NonFinite,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IterationLimit: return "IterationLimit";
        case ErrorKind::DegenerateModel: return "DegenerateModel";
        case ErrorKind::NonPhysicalState: return "NonPhysicalState";
        case ErrorKind::BranchAbsent: return "BranchAbsent";
        case ErrorKind::SingularDenominator: return "SingularDenominator";
        case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorKind::TiedMaximum: return "TiedMaximum";
        case ErrorKind::ZeroNorm: return "ZeroNorm";
        case ErrorKind::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ptdimer

#pragma once

#include <stdexcept>
#include <string>

namespace treespec {

// Error codes, grouped by how the CLI maps them to exit codes:
// input/parse problems (exit 2), violated preconditions on otherwise
// well-formed input (exit 3), and internal cross-check failures that
// indicate a bug or a numerically hopeless request (exit 4).
enum class Errc {
    // parse
    ParseError,
    // preconditions
    CycleDetected,
    Disconnected,
    SelfLoop,
    DuplicateEdge,
    UnknownVertex,
    UnknownEdge,
    InvalidComponent,
    EndpointRuleViolated,
    DirichletDeleted,
    TooManyVariables,
    OffTorus,
    NotOnSecularManifold,
    ContinuityViolated,
    VanishingVertex,
    MismatchedRank,
    OverlappingVariables,
    ZeroRow,
    NonPositiveLength,
    EmptyWindow,
    EmptySystems,
    InfeasibleRelations,
    // internal
    DegenerateSystem,
    SamplingFailed,
    StepTooCoarse,
    CoefficientOverflow,
    CrossCheckFailed,
};

enum class ErrKind { Parse, Precondition, Internal };

inline ErrKind kind_of(Errc c) {
    switch (c) {
    case Errc::ParseError:
        return ErrKind::Parse;
    case Errc::DegenerateSystem:
    case Errc::SamplingFailed:
    case Errc::StepTooCoarse:
    case Errc::CoefficientOverflow:
    case Errc::CrossCheckFailed:
        return ErrKind::Internal;
    default:
        return ErrKind::Precondition;
    }
}

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::Disconnected: return "Disconnected";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::UnknownEdge: return "UnknownEdge";
    case Errc::InvalidComponent: return "InvalidComponent";
    case Errc::EndpointRuleViolated: return "EndpointRuleViolated";
    case Errc::DirichletDeleted: return "DirichletDeleted";
    case Errc::TooManyVariables: return "TooManyVariables";
    case Errc::OffTorus: return "OffTorus";
    case Errc::NotOnSecularManifold: return "NotOnSecularManifold";
    case Errc::ContinuityViolated: return "ContinuityViolated";
    case Errc::VanishingVertex: return "VanishingVertex";
    case Errc::MismatchedRank: return "MismatchedRank";
    case Errc::OverlappingVariables: return "OverlappingVariables";
    case Errc::ZeroRow: return "ZeroRow";
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::EmptySystems: return "EmptySystems";
    case Errc::InfeasibleRelations: return "InfeasibleRelations";
    case Errc::DegenerateSystem: return "DegenerateSystem";
    case Errc::SamplingFailed: return "SamplingFailed";
    case Errc::StepTooCoarse: return "StepTooCoarse";
    case Errc::CoefficientOverflow: return "CoefficientOverflow";
    case Errc::CrossCheckFailed: return "CrossCheckFailed";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }
    ErrKind kind() const noexcept { return kind_of(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace treespec

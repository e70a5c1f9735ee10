#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rosterflow {

enum class ErrorKind {
    // ingestion
    MalformedHeader,
    MalformedRow,
    UnknownTeamCode,
    DuplicatePlayerSeason,
    DuplicateFitnessRow,
    NonPositiveValuation,
    InvalidRank,
    TeamCountMismatch,
    BadConfig,
    // features
    UnknownPosition,
    OwnerNotTransitioning,
    EmptyDataset,
    // graph
    DegenerateGraph,
    NoEdges,
    // classifiers
    DegenerateLabels,
    NonFiniteFeature,
    ManifestMismatch,
    InvalidHyperparameter,
    // experiments
    LengthMismatch,
    Empty,
    EmptyPeriod,
    // synthesis
    InfeasibleConfig,
    // io
    IOFailure,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::UnknownTeamCode: return "UnknownTeamCode";
    case ErrorKind::DuplicatePlayerSeason: return "DuplicatePlayerSeason";
    case ErrorKind::DuplicateFitnessRow: return "DuplicateFitnessRow";
    case ErrorKind::NonPositiveValuation: return "NonPositiveValuation";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::TeamCountMismatch: return "TeamCountMismatch";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::UnknownPosition: return "UnknownPosition";
    case ErrorKind::OwnerNotTransitioning: return "OwnerNotTransitioning";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::NoEdges: return "NoEdges";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorKind::ManifestMismatch: return "ManifestMismatch";
    case ErrorKind::InvalidHyperparameter: return "InvalidHyperparameter";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::EmptyPeriod: return "EmptyPeriod";
    case ErrorKind::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorKind::IOFailure: return "IOFailure";
    }
    return "Unknown";
}

/// Every failure surfaced by the library. `row` is the 1-based data row
/// (header excluded) for file-level errors.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : std::runtime_error(format(kind, what, row)), kind_(kind), row_(row) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    static std::string format(ErrorKind kind, const std::string& what,
                              std::optional<std::size_t> row) {
        std::string msg(to_string(kind));
        if (row) {
            msg += "(row " + std::to_string(*row) + ")";
        }
        if (!what.empty()) {
            msg += ": " + what;
        }
        return msg;
    }

    ErrorKind kind_;
    std::optional<std::size_t> row_;
};

} // namespace rosterflow

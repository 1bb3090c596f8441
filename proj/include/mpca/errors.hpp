#pragma once

#include <stdexcept>
#include <string>

namespace mpca {

enum class ErrorKind {
    Io,
    Format,
    EmptyDataset,
    UnsupportedVersion,
    Corruption,
    TooFewSamples,
    DegenerateColumn,
    InsufficientSamples,
    InvalidData,
    SingularModel,
    InvalidParameter,
    DegenerateResidual,
    ModelNotFinalized,
    PriorKnowledge,
    SchemaMismatch,
};

/// All library failures are thrown as Error; `kind()` identifies the category
/// so callers (and tests) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Io: return "io";
        case ErrorKind::Format: return "format";
        case ErrorKind::EmptyDataset: return "empty-dataset";
        case ErrorKind::UnsupportedVersion: return "unsupported-version";
        case ErrorKind::Corruption: return "corruption";
        case ErrorKind::TooFewSamples: return "too-few-samples";
        case ErrorKind::DegenerateColumn: return "degenerate-column";
        case ErrorKind::InsufficientSamples: return "insufficient-samples";
        case ErrorKind::InvalidData: return "invalid-data";
        case ErrorKind::SingularModel: return "singular-model";
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::DegenerateResidual: return "degenerate-residual";
        case ErrorKind::ModelNotFinalized: return "model-not-finalized";
        case ErrorKind::PriorKnowledge: return "prior-knowledge";
        case ErrorKind::SchemaMismatch: return "schema-mismatch";
    }
    return "unknown";
}

} // namespace mpca

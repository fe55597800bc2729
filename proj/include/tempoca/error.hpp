#pragma once

#include <stdexcept>
#include <string>

namespace tempoca {

// Every failure mode the library reports deliberately. Carrying the kind as an
// enum (instead of one exception type per case) keeps catch sites simple while
// letting tests assert on the precise cause.
enum class ErrorKind {
    MissingValue,   // NaN or infinity in input data
    ConstantSeries, // zero variance column, distances would all tie
    TooShort,       // not enough rows for the requested lags/horizon
    ShapeError,     // malformed panel / dimension mismatch on construction
    ShapeMismatch,  // point-count mismatch between spaces of one estimate
    KTooLarge,      // kNN k >= number of usable points
    RankDeficient,  // regression design matrix has dependent columns
    DomainError,    // argument outside a function's domain
    InvalidSpec,    // unknown structure name / bad generator parameters
    NodeMismatch,   // graphs with different node sets where equal sets needed
    ParseError,     // unreadable CSV / JSON input
    IoError,        // file cannot be opened or written
    SelfTest,       // internal consistency check failed
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::MissingValue: return "MissingValue";
        case ErrorKind::ConstantSeries: return "ConstantSeries";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::ShapeError: return "ShapeError";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::NodeMismatch: return "NodeMismatch";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::SelfTest: return "SelfTest";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tempoca

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netcode {

enum class ErrorCode {
    InvalidArgument,
    SpecMismatch,
    DivisionByZero,
    CapExceeded,
    Parse,
    CycleDetected,
    DanglingReference,
    DuplicateLink,
    UnknownNode,
    MaxflowDeficit,
    BudgetExceeded,
    FieldTooSmall,
    NonBinaryField,
    NotGraphic,
    ColumnWeight,
    RecoveryInfeasible,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::SpecMismatch: return "field spec mismatch";
        case ErrorCode::DivisionByZero: return "inversion of zero";
        case ErrorCode::CapExceeded: return "cap exceeded";
        case ErrorCode::Parse: return "parse error";
        case ErrorCode::CycleDetected: return "cycle detected";
        case ErrorCode::DanglingReference: return "dangling node reference";
        case ErrorCode::DuplicateLink: return "duplicate link id";
        case ErrorCode::UnknownNode: return "unknown node";
        case ErrorCode::MaxflowDeficit: return "maxflow deficit";
        case ErrorCode::BudgetExceeded: return "budget exceeded";
        case ErrorCode::FieldTooSmall: return "field too small";
        case ErrorCode::NonBinaryField: return "non-binary field";
        case ErrorCode::NotGraphic: return "not graphic";
        case ErrorCode::ColumnWeight: return "column weight exceeds 2";
        case ErrorCode::RecoveryInfeasible: return "local-kernel recovery infeasible";
    }
    return "unknown error";
}

/// Exception thrown by every netcode operation; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace netcode

#pragma once

#include <stdexcept>
#include <string>

namespace purejump {

enum class ErrorCode {
    InvalidArgument = 1,
    InvalidSpec,
    ParseError,
    InvalidRegion,
    EmptyRegion,
    QuadratureFailure,
    UnknownAsymptotics,
    ShellOverflow,
    InvalidScheme,
    SchemeMismatch,
    NotSigmaIntegrable,
    NotIntegrable,
    TransformDivergence,
    UncoupledEnsembles,
    DecompositionUnavailable,
    DriftMismatch,
    HypothesisViolation,
    RootFindFailure,
    BudgetExceeded,
    UnknownScenario,
    IoError,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace purejump

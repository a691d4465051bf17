#include "purejump/extended_real.hpp"

#include <limits>
#include <sstream>

#include "purejump/error.hpp"

namespace purejump {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidRegion: return "InvalidRegion";
        case ErrorCode::EmptyRegion: return "EmptyRegion";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::UnknownAsymptotics: return "UnknownAsymptotics";
        case ErrorCode::ShellOverflow: return "ShellOverflow";
        case ErrorCode::InvalidScheme: return "InvalidScheme";
        case ErrorCode::SchemeMismatch: return "SchemeMismatch";
        case ErrorCode::NotSigmaIntegrable: return "NotSigmaIntegrable";
        case ErrorCode::NotIntegrable: return "NotIntegrable";
        case ErrorCode::TransformDivergence: return "TransformDivergence";
        case ErrorCode::UncoupledEnsembles: return "UncoupledEnsembles";
        case ErrorCode::DecompositionUnavailable: return "DecompositionUnavailable";
        case ErrorCode::DriftMismatch: return "DriftMismatch";
        case ErrorCode::HypothesisViolation: return "HypothesisViolation";
        case ErrorCode::RootFindFailure: return "RootFindFailure";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

const char* certificate_kind_name(DivergenceCertificate::Kind kind) noexcept {
    using K = DivergenceCertificate::Kind;
    switch (kind) {
        case K::CapExceeded: return "cap-exceeded";
        case K::ShellGrowth: return "shell-growth";
        case K::PowerTail: return "power-tail";
        case K::ClosedForm: return "closed-form";
        case K::SliceDivergent: return "slice-divergent";
    }
    return "unknown";
}

double ExtendedReal::value() const {
    if (cert_) fail(ErrorCode::InvalidArgument, "value() of an infinite quantity: " + describe());
    return value_;
}

double ExtendedReal::value_or_inf() const noexcept {
    return cert_ ? std::numeric_limits<double>::infinity() : value_;
}

const DivergenceCertificate& ExtendedReal::certificate() const {
    if (!cert_) fail(ErrorCode::InvalidArgument, "certificate() of a finite quantity");
    return *cert_;
}

std::string ExtendedReal::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (!cert_) {
        os << value_;
    } else {
        os << "inf [" << certificate_kind_name(cert_->kind) << " at index " << cert_->index
           << ", partial " << cert_->partial_sum;
        if (!cert_->detail.empty()) os << "; " << cert_->detail;
        os << "]";
    }
    return os.str();
}

ExtendedReal& ExtendedReal::operator+=(const ExtendedReal& other) {
    if (cert_) return *this;
    if (other.cert_) {
        cert_ = other.cert_;
        return *this;
    }
    value_ += other.value_;
    return *this;
}

ExtendedReal ExtendedReal::scaled(double factor) const {
    if (factor == 0.0) return finite(0.0);
    if (cert_) return *this;
    return finite(value_ * factor);
}

}  // namespace purejump

#pragma once

#include <optional>
#include <string>

namespace purejump {

/// How an integral or series was shown to diverge.
struct DivergenceCertificate {
    enum class Kind {
        CapExceeded,     // monotone partial sums passed the cap with non-shrinking increments
        ShellGrowth,     // trailing geometric-shell increments non-decreasing
        PowerTail,       // term asymptotics ~ k^q with q >= -1 (integral test)
        ClosedForm,      // antiderivative diverges at an endpoint
        SliceDivergent,  // inner slice integral infinite on a set of positive clock mass
    };
    Kind kind = Kind::ClosedForm;
    long index = 0;            // shell / term index where divergence was certified
    double partial_sum = 0.0;  // partial sum at that index
    std::string detail;
};

const char* certificate_kind_name(DivergenceCertificate::Kind kind) noexcept;

/// Nonnegative real or +infinity carrying a divergence certificate.
class ExtendedReal {
public:
    ExtendedReal() = default;
    static ExtendedReal finite(double v) { ExtendedReal r; r.value_ = v; return r; }
    static ExtendedReal infinite(DivergenceCertificate cert) {
        ExtendedReal r;
        r.cert_ = std::move(cert);
        return r;
    }

    bool is_finite() const noexcept { return !cert_.has_value(); }
    bool is_infinite() const noexcept { return cert_.has_value(); }
    /// Finite value; throws when infinite.
    double value() const;
    /// Finite value or +inf.
    double value_or_inf() const noexcept;
    const DivergenceCertificate& certificate() const;

    std::string describe() const;

    ExtendedReal& operator+=(const ExtendedReal& other);
    friend ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) { return a += b; }
    /// Scaling by a nonnegative factor; 0 * inf = 0 (measure-theoretic convention).
    ExtendedReal scaled(double factor) const;

private:
    double value_ = 0.0;
    std::optional<DivergenceCertificate> cert_;
};

}  // namespace purejump

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "purejump/classify.hpp"
#include "purejump/integrand.hpp"
#include "purejump/path.hpp"

namespace purejump {

/// int_0^t int eta 1_extra dF dA at the knots (plus atoms for fixed clocks); no membership check.
FvCurve nu_curve(const Integrand& eta, const CompensatorSpec& comp, const std::vector<double>& knots,
                 EtaPart part = EtaPart::All, const std::optional<Region>& extra = std::nullopt);

/// eta * nu on [0, T]. Throws NotSigmaIntegrable with the failing condition.
FvCurve star_nu(const Integrand& eta, const CompensatorSpec& comp, double T, int grid = 256);

/// eta * mu on a simulated path: sum of eta over the jumps plus the compensator of the small part
/// of eta over the jump sizes the path omits.
SamplePath star_mu_on_path(const Integrand& eta, const SamplePath& path, const CompensatorSpec& comp,
                           bool check = true);

/// Certificate for zeta in L(X) when zeta is unbounded near the horizon: int |zeta| |dB| < inf.
FlagResult zeta_integrable(const TimeFunction& zeta, const CompensatorSpec& comp);

/// zeta . X with zeta left-evaluated at jump times. With comp, unbounded zeta is certified first.
SamplePath stoch_integral(const TimeFunction& zeta, const SamplePath& path,
                          const CompensatorSpec* comp = nullptr);

struct TransformResult {
    std::vector<double> times;   // events, knots and grid
    std::vector<double> direct;  // f(Y_t)
    SamplePath star;             // f(Y_0) + xi * mu
    double max_discrepancy = 0.0;
};

TransformResult transform_path(const SmoothFunction& f, const SamplePath& path,
                               const CompensatorSpec* comp = nullptr);

/// Pushforward spec of eta * mu: same clock, kernel image under eta.
CompensatorSpec image_spec(const Integrand& eta, const CompensatorSpec& comp);

/// sup over events, knots and grid times of |a - b| and of left limits.
double path_discrepancy(const SamplePath& a, const SamplePath& b, int grid = 256);

struct AssociativityReport {
    std::string law;
    FlagResult lhs, rhs;  // membership of the two integrands
    double max_discrepancy = 0.0;
    std::size_t paths = 0;
    bool ok = false;
    std::string to_text() const;
};

/// zeta . (eta * mu) versus (zeta eta) * mu.
AssociativityReport check_associativity(const Integrand& eta, const TimeFunction& zeta,
                                        const CompensatorSpec& comp, const Ensemble& ens);
/// psi * (eta * mu) versus psi(eta) * mu.
AssociativityReport check_associativity(const Integrand& eta, const Integrand& psi,
                                        const CompensatorSpec& comp, const Ensemble& ens);

/// max |X - X_0 - x * mu^X| over the ensemble.
double jump_representation_discrepancy(const CompensatorSpec& comp, const Ensemble& ens);

}  // namespace purejump

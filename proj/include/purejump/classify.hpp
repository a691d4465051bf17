#pragma once

#include <array>
#include <optional>
#include <string>

#include "purejump/integrand.hpp"
#include "purejump/kernel.hpp"

namespace purejump {

enum class Membership { Member, NonMember, Undecided };

const char* membership_name(Membership m) noexcept;

struct Witness {
    std::string condition;  // criterion applied
    std::string detail;
    std::optional<ExtendedReal> value;
};

struct FlagResult {
    Membership flag = Membership::Undecided;
    Witness witness;

    bool member() const noexcept { return flag == Membership::Member; }
    bool non_member() const noexcept { return flag == Membership::NonMember; }
};

struct ObstructionResult {
    bool holds = true;  // atom condition: min of one-sided limsups vanishes
    std::string witness;
};

struct ClassReport {
    std::string name;
    std::array<FlagResult, 6> flags;  // J1..J6
    std::string annotation;

    const FlagResult& j(int i) const { return flags.at(static_cast<std::size_t>(i - 1)); }
    /// No member at i with non-member at j > i... in the inclusion order.
    bool chain_consistent() const;
    /// "J5\J6", "J2\J3", ... or "undecided" when the split is not pinned down.
    std::string summary() const;
    std::string to_text() const;
    std::string to_json(int indent = 2) const;
};

FlagResult in_J6(const CompensatorSpec& comp);
FlagResult in_J5(const CompensatorSpec& comp);
FlagResult in_J4(const CompensatorSpec& comp);
ObstructionResult j3_obstruction(const CompensatorSpec& comp);

/// Whether the drift coincides with the truncated mean on the evaluation grid.
FlagResult drift_matches(const CompensatorSpec& comp, const DriftSpec& drift);
/// int |beta| dA over the horizon; throws InvalidSpec when infinite.
void validate_drift(const CompensatorSpec& comp, const DriftSpec& drift);

/// Uses comp.drift unless a drift is supplied.
ClassReport classify(const CompensatorSpec& comp, const std::optional<DriftSpec>& drift = std::nullopt);

FlagResult l_sigma_nu_member(const Integrand& eta, const CompensatorSpec& comp);
FlagResult l_sigma_mu_member(const Integrand& eta, const CompensatorSpec& comp);
/// |eta| * nu < inf on the horizon (absolutely summable integral).
FlagResult l_mu_member(const Integrand& eta, const CompensatorSpec& comp);

/// Same compensator restricted to a < |x| <= b.
CompensatorSpec restrict_band(const CompensatorSpec& comp, double a, double b);

}  // namespace purejump

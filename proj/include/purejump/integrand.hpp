#pragma once

#include <optional>
#include <string>

#include "purejump/kernel.hpp"
#include "purejump/region.hpp"
#include "purejump/time_function.hpp"

namespace purejump {

/// Predictable function eta_t(x) = coef * zeta(t) * sign(x)^odd * |x|^p * 1_region(x).
struct Integrand {
    double coef = 1.0;
    TimeFunction zeta = TimeFunction::constant(1.0);
    bool odd = true;
    double p = 1.0;
    std::optional<Region> region;

    static Integrand zero() { Integrand e; e.coef = 0.0; return e; }
    static Integrand identity() { return Integrand{}; }

    bool is_zero() const noexcept { return coef == 0.0; }
    double operator()(double t, double x) const;
    /// |eta_t(x)| <= 1 iff |x| <= small_threshold(t) (on the region).
    double small_threshold(double t) const;
    /// zeta * eta; requires a time-constant eta.
    Integrand times(const TimeFunction& z) const;
    /// psi(eta(x)); requires p > 0 and time-constant factors.
    Integrand compose_into(const Integrand& psi) const;
    /// Region restricted further.
    Integrand restricted(const Region& r) const;
    Region effective_region() const { return region ? *region : Region::all(); }
    std::string describe() const;
};

/// "0", "x", "-2*x", "x^2", "|x|^0.5", "sign(x)|x|^1.5", optional "@<region>".
Integrand parse_integrand(const std::string& text);

struct SliceIntegral {
    ExtendedReal absolute;   // int |eta_t| dF_t over the selected part
    double signed_value = 0.0;
};

enum class EtaPart { All, Small, Big };

/// int eta_t(x) 1_part 1_extra(x) F_t(dx) for one slice.
SliceIntegral slice_integral(const KernelSpec& k, const Slice& s, const Integrand& eta, EtaPart part,
                             const std::optional<Region>& extra = std::nullopt);
/// int min(|eta_t|^2, 1) F_t(dx).
ExtendedReal slice_square_capped(const KernelSpec& k, const Slice& s, const Integrand& eta);

/// Smooth scalar transform with first and second derivatives.
struct SmoothFunction {
    enum class Kind { Identity, Square, Sin, Cos, Exp };
    Kind kind = Kind::Identity;

    double f(double y) const;
    double df(double y) const;
    double d2f(double y) const;
    std::string name() const;
};

SmoothFunction parse_smooth_function(const std::string& text);

}  // namespace purejump

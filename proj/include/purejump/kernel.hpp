#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "purejump/extended_real.hpp"
#include "purejump/region.hpp"
#include "purejump/time_function.hpp"

namespace purejump {

enum class Sides { Both, Positive };

/// scale * |x|^{-1-alpha(t)} on lower < |x| <= cutoff (positive side only unless symmetric).
struct PowerLaw {
    TimeLinear alpha{0.5, 0.0};
    double cutoff = 1.0;
    double lower = 0.0;
    bool symmetric = true;
    double scale = 1.0;
};

/// Atoms x_k = x_scale k^{-x_pow} x_base^{-k} with masses m_k = m_scale k^{m_pow} m_base^k, k >= 1.
struct AtomFamily {
    double x_scale = 1.0, x_pow = 0.0, x_base = 2.0;
    double m_scale = 1.0, m_pow = 0.0, m_base = 1.0;
    Sides sides = Sides::Both;
    long max_index = 0;  // 0: infinitely many
};

struct AtomList {
    std::vector<std::pair<double, double>> atoms;  // (location, mass)
};

/// For fixed-time clocks: at the n-th clock atom, atoms +-x_scale n^{-x_pow} with total mass prob.
struct SliceAtoms {
    double x_scale = 1.0, x_pow = 1.0, prob = 1.0;
    Sides sides = Sides::Both;
};

/// Unit mass at phi(s)^power, phi(u) = 1/(floor(u)+1), s = tan t (time_changed) or t.
struct StepAtom {
    int power = 2;
    bool time_changed = false;
};

struct KernelSpec;

struct MixturePart {
    double weight = 1.0;
    std::shared_ptr<const KernelSpec> kernel;
};

struct Mixture {
    std::vector<MixturePart> parts;
};

struct KernelSpec {
    std::variant<PowerLaw, AtomFamily, AtomList, SliceAtoms, StepAtom, Mixture> v;
};

struct Lebesgue {
    TimeLinear rate{1.0, 0.0};
};

/// Clock atoms at t_n with weights w_n. Either an explicit list or the generator
/// t_n = base + step n^{-tpow}, w_n = weight, n >= 1 (n_max caps simulation only).
struct FixedTimes {
    std::vector<double> times;
    std::vector<double> weights;
    bool generated = false;
    double base = 0.0, step = 1.0, tpow = 1.0, weight = 1.0;
    long n_max = 100000;
};

/// A_t = rate * tan(t ^ pi/2).
struct TanChange {
    double rate = 1.0;
};

struct ClockSpec {
    std::variant<Lebesgue, FixedTimes, TanChange> v;
};

struct Component {
    int id = 0;
    KernelSpec kernel;
    ClockSpec clock;
};

struct DriftSpec {
    enum class Mode { Explicit, Matching };
    Mode mode = Mode::Explicit;
    TimeLinear beta{0.0, 0.0};
};

struct TruncationScheme {
    enum class Kind { Auto, Dyadic, AtomAligned };
    enum class LevelDrift { None, Alternating };
    Kind kind = Kind::Auto;
    int levels = 20;
    LevelDrift level_drift = LevelDrift::None;
    double alt_amplitude = 1.0;
};

struct CompensatorSpec {
    std::string name;
    double horizon = 1.0;
    std::vector<Component> components;
    DriftSpec drift;
    TruncationScheme scheme;
};

/// Point of the clock at which a slice kernel is evaluated. atom >= 1 for fixed-time clocks.
struct Slice {
    double t = 0.0;
    long atom = -1;
};

struct MomentResult {
    ExtendedReal absolute;      // int_region |x|^p F(dx)
    double signed_value = 0.0;  // int_region sign(x) |x|^p F(dx), when absolute is finite
};

namespace kernel {

// ---- slice-level queries --------------------------------------------------

MomentResult moment(const KernelSpec& k, const Slice& s, double p, const Region& region);
/// Mass of region.
double mass(const KernelSpec& k, const Slice& s, const Region& region);
bool is_atomic(const KernelSpec& k);
bool time_independent(const KernelSpec& k);
/// Discontinuities of t -> F_t in (t0, t1).
std::vector<double> breakpoints(const KernelSpec& k, double t0, double t1);
/// Kernel with x -> c sign(x)^odd |x|^p applied; Invalid for non-injective maps.
KernelSpec push_forward(const KernelSpec& k, double c, double p, bool odd);

/// Atoms of the slice inside region (location, mass); throws if infinitely many.
std::vector<std::pair<double, double>> atoms_in(const KernelSpec& k, const Slice& s,
                                                const Region& region, std::size_t cap = 1000000);

struct LimsupReport {
    bool vanishes = true;
    std::string witness;
};

enum class Side { FromAbove, FromBelow };

/// Whether limsup |x| F({x}) = 0 as x -> 0 on the side, from generator metadata.
LimsupReport atom_limsup(const KernelSpec& k, Side side);

/// Draw from F restricted to region and normalised. EmptyRegion when mass is zero.
double sample(const KernelSpec& k, const Slice& s, const Region& region, std::mt19937_64& rng);

/// Uniform on [0,1) from 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---- clock-level queries ---------------------------------------------------

/// A_{t1} - A_{t0}; +inf past an accumulation point.
double clock_mass(const ClockSpec& c, double t0, double t1);
bool clock_is_atomic(const ClockSpec& c);
/// Density a(t) with dA = a(t) dt (continuous clocks).
double clock_density(const ClockSpec& c, double t);

/// Index range [lo, hi] (hi < 0: unbounded) of clock atoms with t_n in (t0, t1].
std::pair<long, long> atom_index_range(const FixedTimes& f, double t0, double t1);
double atom_time(const FixedTimes& f, long n);
double atom_weight(const FixedTimes& f, long n);
/// Explicit clock atoms with times in (t0, t1], index <= cap; sorted by time.
std::vector<std::pair<Slice, double>> clock_atoms(const FixedTimes& f, double t0, double t1,
                                                  long cap);

struct ClockIntegralOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    long direct_terms = 16384;
    bool constant_in_time = false;     // g depends on t only through the kernel
    std::vector<double> extra_breaks;  // discontinuities of g beyond the kernel's own
};

/// int_(t0,t1] g(slice) dA for nonnegative g (possibly infinite per slice).
ExtendedReal clock_integral(const Component& comp, const std::function<ExtendedReal(const Slice&)>& g,
                            double t0, double t1, const ClockIntegralOptions& opts = {});
/// Signed version for integrands already known to be absolutely integrable.
double clock_integral_signed(const Component& comp, const std::function<double(const Slice&)>& g,
                             double t0, double t1, const ClockIntegralOptions& opts = {});

// ---- compensator-level operations -----------------------------------------

/// int_region |x|^p F_t(dx) for component `component` of comp.
ExtendedReal partial_moment(const CompensatorSpec& comp, double p, const Region& region, double t,
                            int component = 0);

struct TruncatedMean {
    double value = 0.0;
    bool absolutely_convergent = true;
    ExtendedReal absolute;
};

TruncatedMean signed_truncated_mean(const CompensatorSpec& comp, const Region& region, double t,
                                    int component = 0);

/// Resolved truncation grid for the spec's scheme.
struct LevelGrid {
    bool atom_aligned = false;
    std::vector<double> sizes;  // atom sizes s_1 > s_2 > ... (atom-aligned only)

    /// Lower boundary of level j (level j = (lower(j), upper(j)]).
    double lower(int j) const;
    double upper(int j) const;
    Region region(int j) const;
    /// Jumps not retained when levels 0..K-1 are kept: { 0 < |x| <= lower(K-1) }.
    Region untruncated(int K) const;
    int level_of(double x) const;
};

LevelGrid level_grid(const CompensatorSpec& comp, int levels);

enum class ShellSide { Both, Positive, Negative };

/// F_t(level k) under the spec's truncation grid.
double shell_mass(const CompensatorSpec& comp, int k, double t, ShellSide side = ShellSide::Both,
                  int component = 0);

LimsupReport atom_limsup_vanishes(const CompensatorSpec& comp, Side side, int component = 0);

double sample_jump_size(const CompensatorSpec& comp, const Region& region, double t,
                        std::mt19937_64& rng, int component = 0);

/// Checks int (x^2 ^ 1) F_t(dx) < inf across the horizon; throws InvalidSpec.
void validate(const CompensatorSpec& comp);

/// Slice for time t of a component (atom index resolved for fixed-time clocks).
Slice slice_at(const Component& comp, double t);

std::string describe(const KernelSpec& k);
std::string describe(const ClockSpec& c);

}  // namespace kernel
}  // namespace purejump

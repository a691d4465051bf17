#include <algorithm>
#include <cmath>
#include <sstream>

#include "purejump/error.hpp"
#include "purejump/kernel.hpp"

namespace purejump::kernel {

namespace {

const Component& component_at(const CompensatorSpec& comp, int component) {
    if (component < 0 || component >= static_cast<int>(comp.components.size())) {
        fail(ErrorCode::InvalidArgument, "component index out of range");
    }
    return comp.components[static_cast<std::size_t>(component)];
}

void atom_sizes(const KernelSpec& k, int count, std::vector<double>& out) {
    std::visit(
        [&](const auto& ker) {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, AtomFamily>) {
                const long lim = ker.max_index > 0 ? std::min<long>(ker.max_index, count) : count;
                for (long j = 1; j <= lim; ++j) {
                    const double kd = static_cast<double>(j);
                    out.push_back(std::exp(std::log(ker.x_scale) - ker.x_pow * std::log(kd) -
                                           kd * std::log(ker.x_base)));
                }
            } else if constexpr (std::is_same_v<T, SliceAtoms>) {
                for (int n = 1; n <= count; ++n) out.push_back(ker.x_scale * std::pow(n, -ker.x_pow));
            } else if constexpr (std::is_same_v<T, StepAtom>) {
                for (int n = 1; n <= count; ++n) out.push_back(std::pow(1.0 / n, ker.power));
            } else if constexpr (std::is_same_v<T, AtomList>) {
                for (const auto& a : ker.atoms) out.push_back(std::abs(a.first));
            } else if constexpr (std::is_same_v<T, Mixture>) {
                for (const auto& p : ker.parts) atom_sizes(*p.kernel, count, out);
            }
        },
        k.v);
}

}  // namespace

ExtendedReal partial_moment(const CompensatorSpec& comp, double p, const Region& region, double t,
                            int component) {
    const Component& c = component_at(comp, component);
    return moment(c.kernel, slice_at(c, t), p, region).absolute;
}

TruncatedMean signed_truncated_mean(const CompensatorSpec& comp, const Region& region, double t,
                                    int component) {
    const Component& c = component_at(comp, component);
    const MomentResult r = moment(c.kernel, slice_at(c, t), 1.0, region);
    TruncatedMean out;
    out.absolute = r.absolute;
    out.absolutely_convergent = r.absolute.is_finite();
    out.value = out.absolutely_convergent ? r.signed_value : 0.0;
    return out;
}

double LevelGrid::lower(int j) const {
    if (j < 0) return kInf;
    if (!atom_aligned) return std::ldexp(1.0, -j - 1);
    const std::size_t idx = static_cast<std::size_t>(j) + 1;
    return idx < sizes.size() ? sizes[idx] : 0.0;
}

double LevelGrid::upper(int j) const {
    if (j <= 0) return kInf;
    return lower(j - 1);
}

Region LevelGrid::region(int j) const {
    const double lo = lower(j), hi = upper(j);
    if (!(hi > lo)) return Region();
    return Region::abs_band(lo, hi, false, hi != kInf);
}

Region LevelGrid::untruncated(int K) const {
    if (K <= 0) return Region::all();
    const double th = lower(K - 1);
    if (th <= 0.0) return Region();
    return Region::abs_band(0.0, th, false, true);
}

int LevelGrid::level_of(double x) const {
    const double ax = std::abs(x);
    if (!atom_aligned) {
        if (ax > 0.5) return 0;
        int j = static_cast<int>(std::ceil(std::log2(1.0 / ax))) - 1;
        while (j > 0 && ax > std::ldexp(1.0, -j)) --j;
        while (ax <= std::ldexp(1.0, -j - 1)) ++j;
        return j;
    }
    // level j = (s_{j+2}, s_{j+1}], sizes 0-based: (sizes[j+1], sizes[j]]
    if (sizes.size() < 2 || ax > sizes[1]) return 0;
    const auto it = std::lower_bound(sizes.begin(), sizes.end(), ax, std::greater<double>());
    // *it <= ax, it points to the first size not greater than ax
    int idx = static_cast<int>(it - sizes.begin());
    if (it != sizes.end() && *it == ax) return std::max(0, idx);
    return std::max(0, idx - 1);
}

LevelGrid level_grid(const CompensatorSpec& comp, int levels) {
    LevelGrid g;
    const auto kind = comp.scheme.kind;
    bool atomic = !comp.components.empty();
    for (const auto& c : comp.components) atomic = atomic && is_atomic(c.kernel);
    if (kind == TruncationScheme::Kind::AtomAligned && !atomic) {
        fail(ErrorCode::InvalidScheme, "atom-aligned levels need atomic kernels");
    }
    g.atom_aligned = kind == TruncationScheme::Kind::AtomAligned ||
                     (kind == TruncationScheme::Kind::Auto && atomic);
    if (!g.atom_aligned) return g;
    std::vector<double> sizes;
    for (const auto& c : comp.components) atom_sizes(c.kernel, levels + 2, sizes);
    std::sort(sizes.begin(), sizes.end(), std::greater<double>());
    std::vector<double> uniq;
    for (double s : sizes) {
        if (!(s > 0.0)) continue;
        if (uniq.empty() || std::abs(uniq.back() - s) > 1e-14 * uniq.back()) uniq.push_back(s);
    }
    if (uniq.size() > static_cast<std::size_t>(levels) + 2) uniq.resize(static_cast<std::size_t>(levels) + 2);
    g.sizes = std::move(uniq);
    return g;
}

double shell_mass(const CompensatorSpec& comp, int k, double t, ShellSide side, int component) {
    if (k < 0) fail(ErrorCode::InvalidArgument, "shell index must be nonnegative");
    const LevelGrid g = level_grid(comp, std::max(comp.scheme.levels, k + 1));
    Region r = g.region(k);
    if (side == ShellSide::Positive) r = r.intersect(Region::positive(0.0, kInf, false, false));
    if (side == ShellSide::Negative) r = r.intersect(Region::negative(0.0, kInf, false, false));
    const Component& c = component_at(comp, component);
    return mass(c.kernel, slice_at(c, t), r);
}

LimsupReport atom_limsup_vanishes(const CompensatorSpec& comp, Side side, int component) {
    return atom_limsup(component_at(comp, component).kernel, side);
}

double sample_jump_size(const CompensatorSpec& comp, const Region& region, double t,
                        std::mt19937_64& rng, int component) {
    const Component& c = component_at(comp, component);
    return sample(c.kernel, slice_at(c, t), region, rng);
}

namespace {

void validate_kernel_params(const KernelSpec& k) {
    std::visit(
        [&](const auto& ker) {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                if (!(ker.cutoff > 0.0)) fail(ErrorCode::InvalidSpec, "power-law cutoff must be positive");
                if (!(ker.lower >= 0.0 && ker.lower < ker.cutoff)) {
                    fail(ErrorCode::InvalidSpec, "power-law lower cutoff must lie in [0, cutoff)");
                }
                if (!(ker.scale > 0.0)) fail(ErrorCode::InvalidSpec, "power-law scale must be positive");
            } else if constexpr (std::is_same_v<T, AtomFamily>) {
                if (!(ker.x_scale > 0.0 && ker.m_scale > 0.0 && ker.x_base > 0.0 && ker.m_base > 0.0)) {
                    fail(ErrorCode::InvalidSpec, "atom family parameters must be positive");
                }
                if (ker.x_pow < 0.0 || ker.x_base < 1.0 || (ker.x_pow == 0.0 && ker.x_base == 1.0)) {
                    fail(ErrorCode::InvalidSpec, "atom locations must decrease strictly to 0");
                }
            } else if constexpr (std::is_same_v<T, AtomList>) {
                for (const auto& [x, m] : ker.atoms) {
                    if (x == 0.0 || !std::isfinite(x)) fail(ErrorCode::InvalidSpec, "atom at 0 or non-finite");
                    if (!(m >= 0.0) || !std::isfinite(m)) fail(ErrorCode::InvalidSpec, "negative atom mass");
                }
            } else if constexpr (std::is_same_v<T, SliceAtoms>) {
                if (!(ker.x_scale > 0.0) || ker.x_pow < 0.0) fail(ErrorCode::InvalidSpec, "bad slice atoms");
                if (!(ker.prob >= 0.0)) fail(ErrorCode::InvalidSpec, "slice atom mass must be nonnegative");
            } else if constexpr (std::is_same_v<T, StepAtom>) {
                if (ker.power < 1) fail(ErrorCode::InvalidSpec, "step atom power must be >= 1");
            } else {
                for (const auto& p : ker.parts) {
                    if (!(p.weight >= 0.0) || !p.kernel) fail(ErrorCode::InvalidSpec, "bad mixture part");
                    validate_kernel_params(*p.kernel);
                }
            }
        },
        k.v);
}

}  // namespace

void validate(const CompensatorSpec& comp) {
    if (!(comp.horizon > 0.0)) fail(ErrorCode::InvalidSpec, "horizon must be positive");
    if (comp.components.empty()) return;
    for (const auto& c : comp.components) {
        validate_kernel_params(c.kernel);
        if (std::holds_alternative<SliceAtoms>(c.kernel.v) && !clock_is_atomic(c.clock)) {
            fail(ErrorCode::InvalidSpec, "slice atoms need a fixed-times clock");
        }
        if (const auto* f = std::get_if<FixedTimes>(&c.clock.v)) {
            if (!f->generated) {
                if (f->times.size() != f->weights.size()) fail(ErrorCode::InvalidSpec, "times/weights size mismatch");
                for (std::size_t i = 0; i < f->times.size(); ++i) {
                    if (!(f->weights[i] > 0.0)) fail(ErrorCode::InvalidSpec, "clock atom weights must be positive");
                    if (i && !(f->times[i] > f->times[i - 1])) fail(ErrorCode::InvalidSpec, "clock atom times must increase");
                    if (f->times[i] < 0.0) fail(ErrorCode::InvalidSpec, "clock atom at negative time");
                }
            } else if (!(f->weight > 0.0) || f->tpow <= 0.0 || f->step == 0.0) {
                fail(ErrorCode::InvalidSpec, "bad fixed-times generator");
            }
        }
        if (const auto* lb = std::get_if<Lebesgue>(&c.clock.v)) {
            if (lb->rate(0.0) < 0.0 || lb->rate(comp.horizon) < 0.0) {
                fail(ErrorCode::InvalidSpec, "clock rate must be nonnegative");
            }
        }
        std::vector<Slice> probes;
        if (const auto* f = std::get_if<FixedTimes>(&c.clock.v)) {
            for (const auto& [s, w] : clock_atoms(*f, -1.0, comp.horizon, 16)) probes.push_back(s);
        } else {
            const double T = std::holds_alternative<TanChange>(c.clock.v) ? std::min(comp.horizon, 1.5)
                                                                          : comp.horizon;
            for (int i = 0; i <= 16; ++i) probes.push_back(Slice{T * i / 16.0, -1});
        }
        for (const auto& s : probes) {
            const ExtendedReal q = moment(c.kernel, s, 2.0, Region::small_jumps()).absolute;
            const ExtendedReal big = moment(c.kernel, s, 0.0, Region::big_jumps()).absolute;
            if (q.is_infinite() || big.is_infinite()) {
                std::ostringstream os;
                os << "int (x^2 ^ 1) F_t(dx) infinite at t=" << s.t << " for " << describe(c.kernel);
                fail(ErrorCode::InvalidSpec, os.str());
            }
        }
    }
}

}  // namespace purejump::kernel

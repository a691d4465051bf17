#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "purejump/error.hpp"
#include "purejump/kernel.hpp"
#include "purejump/numerics.hpp"

namespace purejump::kernel {

namespace {

using numerics::CompensatedSum;

// int_a^b x^s dx, 0 <= a <= b <= inf.
ExtendedReal power_integral(double a, double b, double s) {
    const double e = s + 1.0;
    if (a == b) return ExtendedReal::finite(0.0);
    if (a == 0.0 && e <= 0.0) {
        std::ostringstream os;
        os << "x^" << s << " not integrable at 0";
        return ExtendedReal::infinite({DivergenceCertificate::Kind::ClosedForm, 0, kInf, os.str()});
    }
    if (b == kInf && e >= 0.0) {
        std::ostringstream os;
        os << "x^" << s << " not integrable at infinity";
        return ExtendedReal::infinite({DivergenceCertificate::Kind::ClosedForm, 0, kInf, os.str()});
    }
    if (e == 0.0) return ExtendedReal::finite(std::log(b / a));
    if (a == 0.0) return ExtendedReal::finite(std::pow(b, e) / e);
    if (b == kInf) return ExtendedReal::finite(-std::pow(a, e) / e);
    return ExtendedReal::finite(-std::pow(b, e) * std::expm1(e * std::log(a / b)) / e);
}

struct Piece {
    double sign;  // +1 positive side, -1 negative side
    double a, b;  // |x| range
    bool a_closed, b_closed;
};

// Split region into |x|-ranges per side.
std::vector<Piece> pieces(const Region& region) {
    std::vector<Piece> out;
    for (const auto& iv : region.parts()) {
        if (iv.positive()) {
            out.push_back({1.0, iv.lo, iv.hi, iv.lo_closed, iv.hi_closed});
        } else {
            out.push_back({-1.0, -iv.hi, -iv.lo, iv.hi_closed, iv.lo_closed});
        }
    }
    return out;
}

// ---- AtomFamily helpers ---------------------------------------------------

double log_x(const AtomFamily& f, long k) {
    const double kd = static_cast<double>(k);
    return std::log(f.x_scale) - f.x_pow * std::log(kd) - kd * std::log(f.x_base);
}

double atom_x(const AtomFamily& f, long k) { return std::exp(log_x(f, k)); }

double atom_m(const AtomFamily& f, long k) {
    const double kd = static_cast<double>(k);
    return std::exp(std::log(f.m_scale) + f.m_pow * std::log(kd) + kd * std::log(f.m_base));
}

constexpr long kIndexCap = 1L << 52;

long index_limit(const AtomFamily& f) { return f.max_index > 0 ? f.max_index : kIndexCap; }

// Largest k with x_k >= a (or > a); with a == 0 the family end.
long last_index(const AtomFamily& f, double a, bool closed) {
    const long lim = index_limit(f);
    if (a <= 0.0) return lim;
    auto ok = [&](long k) {
        const double x = atom_x(f, k);
        return closed ? x >= a : x > a;
    };
    if (!ok(1)) return 0;
    long lo = 1, hi = 2;
    while (hi < lim && ok(hi)) {
        lo = hi;
        hi = std::min(lim, hi * 2);
    }
    if (ok(hi)) return hi;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

// Smallest k with x_k <= b (or < b).
long first_index(const AtomFamily& f, double b, bool closed) {
    auto ok = [&](long k) {
        const double x = atom_x(f, k);
        return closed ? x <= b : x < b;
    };
    if (b == kInf || ok(1)) return 1;
    const long lim = index_limit(f);
    long lo = 1, hi = 2;
    while (hi < lim && !ok(hi)) {
        lo = hi;
        hi = std::min(lim, hi * 2);
    }
    if (!ok(hi)) return lim + 1;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

MomentResult family_moment(const AtomFamily& f, double p, const Region& region) {
    // |x_k|^p m_k = C k^q r^k
    const double C = std::pow(f.x_scale, p) * f.m_scale;
    const double q = f.m_pow - p * f.x_pow;
    const double r = f.m_base / std::pow(f.x_base, p);
    const double logC = std::log(C), logr = std::log(r);
    auto term = [&](long k) {
        const double kd = static_cast<double>(k);
        return std::exp(logC + q * std::log(kd) + kd * logr);
    };
    MomentResult res;
    res.absolute = ExtendedReal::finite(0.0);
    CompensatedSum signed_sum;
    for (const auto& pc : pieces(region)) {
        if (pc.sign < 0.0 && f.sides == Sides::Positive) continue;
        const long k0 = first_index(f, pc.b, pc.b_closed);
        const long k1 = last_index(f, pc.a, pc.a_closed);
        if (k1 < k0) continue;
        std::optional<long> last;
        if (k1 < kIndexCap) last = k1;
        ExtendedReal part = numerics::sum_series(term, k0, last);
        res.absolute += part;
        if (part.is_finite()) signed_sum += pc.sign * part.value();
    }
    res.signed_value = res.absolute.is_finite() ? signed_sum.value() : 0.0;
    return res;
}

// Atoms of a slice kernel; nullopt when the kernel is a density or an infinite family.
std::vector<std::pair<double, double>> slice_atoms(const SliceAtoms& sa, long n) {
    std::vector<std::pair<double, double>> out;
    if (n < 1) return out;
    const double x = sa.x_scale * std::pow(static_cast<double>(n), -sa.x_pow);
    if (sa.sides == Sides::Both) {
        out.push_back({x, 0.5 * sa.prob});
        out.push_back({-x, 0.5 * sa.prob});
    } else {
        out.push_back({x, sa.prob});
    }
    return out;
}

double step_location(const StepAtom& st, double t) {
    double s = t;
    if (st.time_changed) s = t >= kHalfPi ? kInf : std::tan(std::max(t, 0.0));
    if (s == kInf) return 0.0;
    const double phi = 1.0 / (std::floor(std::max(s, 0.0)) + 1.0);
    return std::pow(phi, st.power);
}

MomentResult finite_atoms_moment(const std::vector<std::pair<double, double>>& atoms, double p,
                                 const Region& region) {
    CompensatedSum abs_sum, signed_sum;
    for (const auto& [x, m] : atoms) {
        if (m == 0.0 || !region.contains(x)) continue;
        const double v = std::pow(std::abs(x), p) * m;
        abs_sum += v;
        signed_sum += (x > 0.0 ? v : -v);
    }
    return {ExtendedReal::finite(abs_sum.value()), signed_sum.value()};
}

struct MomentVisitor {
    const Slice& s;
    double p;
    const Region& region;

    MomentResult operator()(const PowerLaw& pl) const {
        const double alpha = pl.alpha(s.t);
        const double sexp = p - 1.0 - alpha;
        Region support = pl.symmetric ? Region::abs_band(pl.lower, pl.cutoff, false, true)
                                      : Region::positive(pl.lower, pl.cutoff, false, true);
        MomentResult res;
        res.absolute = ExtendedReal::finite(0.0);
        CompensatedSum signed_sum;
        for (const auto& pc : pieces(region.intersect(support))) {
            ExtendedReal part = power_integral(pc.a, pc.b, sexp).scaled(pl.scale);
            res.absolute += part;
            if (part.is_finite()) signed_sum += pc.sign * part.value();
        }
        res.signed_value = res.absolute.is_finite() ? signed_sum.value() : 0.0;
        return res;
    }
    MomentResult operator()(const AtomFamily& f) const { return family_moment(f, p, region); }
    MomentResult operator()(const AtomList& l) const { return finite_atoms_moment(l.atoms, p, region); }
    MomentResult operator()(const SliceAtoms& sa) const {
        return finite_atoms_moment(slice_atoms(sa, s.atom), p, region);
    }
    MomentResult operator()(const StepAtom& st) const {
        const double x = step_location(st, s.t);
        if (x == 0.0) return {ExtendedReal::finite(0.0), 0.0};
        return finite_atoms_moment({{x, 1.0}}, p, region);
    }
    MomentResult operator()(const Mixture& mx) const {
        MomentResult res;
        res.absolute = ExtendedReal::finite(0.0);
        CompensatedSum signed_sum;
        for (const auto& part : mx.parts) {
            MomentResult r = moment(*part.kernel, s, p, region);
            res.absolute += r.absolute.scaled(part.weight);
            if (r.absolute.is_finite()) signed_sum += part.weight * r.signed_value;
        }
        res.signed_value = res.absolute.is_finite() ? signed_sum.value() : 0.0;
        return res;
    }
};

}  // namespace

MomentResult moment(const KernelSpec& k, const Slice& s, double p, const Region& region) {
    if (p < 0.0) fail(ErrorCode::InvalidArgument, "moment order must be nonnegative");
    if (region.is_empty()) return {ExtendedReal::finite(0.0), 0.0};
    return std::visit(MomentVisitor{s, p, region}, k.v);
}

double mass(const KernelSpec& k, const Slice& s, const Region& region) {
    const MomentResult r = moment(k, s, 0.0, region);
    if (r.absolute.is_infinite()) {
        fail(ErrorCode::InvalidSpec, "infinite mass on " + region.describe() + ": " +
                                         r.absolute.describe());
    }
    return r.absolute.value();
}

bool is_atomic(const KernelSpec& k) {
    if (std::holds_alternative<PowerLaw>(k.v)) return false;
    if (const auto* mx = std::get_if<Mixture>(&k.v)) {
        return std::all_of(mx->parts.begin(), mx->parts.end(),
                           [](const MixturePart& p) { return is_atomic(*p.kernel); });
    }
    return true;
}

bool time_independent(const KernelSpec& k) {
    if (const auto* pl = std::get_if<PowerLaw>(&k.v)) return pl->alpha.is_constant();
    if (std::holds_alternative<StepAtom>(k.v)) return false;
    if (const auto* mx = std::get_if<Mixture>(&k.v)) {
        return std::all_of(mx->parts.begin(), mx->parts.end(),
                           [](const MixturePart& p) { return time_independent(*p.kernel); });
    }
    return true;
}

std::vector<double> breakpoints(const KernelSpec& k, double t0, double t1) {
    std::vector<double> out;
    if (const auto* st = std::get_if<StepAtom>(&k.v)) {
        if (st->time_changed) {
            out = TimeFunction::inv_phi_tan().breakpoints(t0, t1);
        } else {
            for (double b = std::floor(t0) + 1.0; b < t1; b += 1.0) {
                if (b > t0) out.push_back(b);
            }
        }
    } else if (const auto* mx = std::get_if<Mixture>(&k.v)) {
        for (const auto& p : mx->parts) {
            auto b = breakpoints(*p.kernel, t0, t1);
            out.insert(out.end(), b.begin(), b.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

KernelSpec push_forward(const KernelSpec& k, double c, double p, bool odd) {
    if (!(p > 0.0) || c == 0.0) fail(ErrorCode::InvalidArgument, "push_forward needs c != 0, p > 0");
    const double ac = std::abs(c);
    return std::visit(
        [&](const auto& ker) -> KernelSpec {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                if (!ker.alpha.is_constant()) {
                    fail(ErrorCode::InvalidArgument, "push_forward of a time-modulated power law");
                }
                if (ker.symmetric && !odd) fail(ErrorCode::InvalidArgument, "image map not injective");
                if (!ker.symmetric && c < 0.0) {
                    fail(ErrorCode::InvalidArgument, "image of one-sided kernel under negative map");
                }
                const double a = ker.alpha.c0;
                PowerLaw out;
                out.alpha = {a / p, 0.0};
                out.cutoff = ac * std::pow(ker.cutoff, p);
                out.lower = ac * std::pow(ker.lower, p);
                out.symmetric = ker.symmetric;
                out.scale = ker.scale * std::pow(ac, a / p) / p;
                return KernelSpec{out};
            } else if constexpr (std::is_same_v<T, AtomList>) {
                std::map<double, double> merged;
                for (const auto& [x, m] : ker.atoms) {
                    const double sx = (odd && x < 0.0) ? -1.0 : 1.0;
                    merged[c * sx * std::pow(std::abs(x), p)] += m;
                }
                AtomList out;
                for (const auto& [x, m] : merged) out.atoms.push_back({x, m});
                return KernelSpec{out};
            } else if constexpr (std::is_same_v<T, SliceAtoms> || std::is_same_v<T, AtomFamily>) {
                T out = ker;
                out.x_scale = ac * std::pow(ker.x_scale, p);
                out.x_pow = p * ker.x_pow;
                if constexpr (std::is_same_v<T, AtomFamily>) out.x_base = std::pow(ker.x_base, p);
                if (ker.sides == Sides::Positive || (!odd && ker.sides == Sides::Both)) {
                    if (c < 0.0) fail(ErrorCode::InvalidArgument, "image lies on the negative side only");
                    if (ker.sides == Sides::Both) {
                        out.sides = Sides::Positive;
                        if constexpr (std::is_same_v<T, AtomFamily>) out.m_scale *= 2.0;
                    }
                }
                return KernelSpec{out};
            } else if constexpr (std::is_same_v<T, StepAtom>) {
                const double np = ker.power * p;
                if (c != 1.0 || np != std::round(np)) {
                    fail(ErrorCode::InvalidArgument, "push_forward of step atom needs c = 1, integer power");
                }
                StepAtom out = ker;
                out.power = static_cast<int>(np);
                return KernelSpec{out};
            } else {
                Mixture out;
                for (const auto& part : ker.parts) {
                    out.parts.push_back({part.weight, std::make_shared<const KernelSpec>(
                                                          push_forward(*part.kernel, c, p, odd))});
                }
                return KernelSpec{out};
            }
        },
        k.v);
}

std::vector<std::pair<double, double>> atoms_in(const KernelSpec& k, const Slice& s,
                                                const Region& region, std::size_t cap) {
    std::vector<std::pair<double, double>> out;
    auto keep = [&](double x, double m) {
        if (m > 0.0 && region.contains(x)) out.push_back({x, m});
    };
    std::visit(
        [&](const auto& ker) {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, AtomList>) {
                for (const auto& [x, m] : ker.atoms) keep(x, m);
            } else if constexpr (std::is_same_v<T, SliceAtoms>) {
                for (const auto& [x, m] : slice_atoms(ker, s.atom)) keep(x, m);
            } else if constexpr (std::is_same_v<T, StepAtom>) {
                const double x = step_location(ker, s.t);
                if (x != 0.0) keep(x, 1.0);
            } else if constexpr (std::is_same_v<T, AtomFamily>) {
                for (const auto& pc : pieces(region)) {
                    if (pc.sign < 0.0 && ker.sides == Sides::Positive) continue;
                    const long k0 = first_index(ker, pc.b, pc.b_closed);
                    const long k1 = last_index(ker, pc.a, pc.a_closed);
                    if (k1 >= k0 && static_cast<std::size_t>(k1 - k0) >= cap) {
                        fail(ErrorCode::InvalidArgument, "region holds too many atoms to enumerate");
                    }
                    for (long j = k0; j <= k1; ++j) out.push_back({pc.sign * atom_x(ker, j), atom_m(ker, j)});
                }
            } else if constexpr (std::is_same_v<T, Mixture>) {
                for (const auto& part : ker.parts) {
                    for (const auto& [x, m] : atoms_in(*part.kernel, s, region, cap)) {
                        out.push_back({x, m * part.weight});
                    }
                }
            }
        },
        k.v);
    return out;
}

LimsupReport atom_limsup(const KernelSpec& k, Side side) {
    return std::visit(
        [&](const auto& ker) -> LimsupReport {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                return {true, "atomless density"};
            } else if constexpr (std::is_same_v<T, AtomList> || std::is_same_v<T, SliceAtoms> ||
                                 std::is_same_v<T, StepAtom>) {
                return {true, "finitely many atoms per slice"};
            } else if constexpr (std::is_same_v<T, AtomFamily>) {
                if (side == Side::FromBelow && ker.sides == Sides::Positive) {
                    return {true, "no atoms on the negative side"};
                }
                if (ker.max_index > 0) return {true, "finitely many atoms"};
                const double C = ker.x_scale * ker.m_scale;
                const double q = ker.m_pow - ker.x_pow;
                const double r = ker.m_base / ker.x_base;
                std::ostringstream os;
                os.precision(12);
                os << "x_k m_k = " << C << " * k^" << q << " * " << r << "^k";
                const bool vanish = r < 1.0 || (r == 1.0 && q < 0.0);
                os << (vanish ? " -> 0" : " does not vanish");
                return {vanish, os.str()};
            } else {
                LimsupReport rep{true, "mixture"};
                for (const auto& part : ker.parts) {
                    if (part.weight == 0.0) continue;
                    LimsupReport r = atom_limsup(*part.kernel, side);
                    if (!r.vanishes) return r;
                }
                return rep;
            }
        },
        k.v);
}

namespace {

double sample_power(double a, double b, double alpha, double u) {
    const double e = -alpha;
    if (e == 0.0) return a * std::pow(b / a, u);
    const double ae = a == 0.0 ? 0.0 : std::pow(a, e);
    const double be = b == kInf ? 0.0 : std::pow(b, e);
    return std::pow(ae + u * (be - ae), 1.0 / e);
}

}  // namespace

double sample(const KernelSpec& k, const Slice& s, const Region& region, std::mt19937_64& rng) {
    if (const auto* pl = std::get_if<PowerLaw>(&k.v)) {
        Region support = pl->symmetric ? Region::abs_band(pl->lower, pl->cutoff, false, true)
                                       : Region::positive(pl->lower, pl->cutoff, false, true);
        const auto ps = pieces(region.intersect(support));
        const double alpha = pl->alpha(s.t);
        std::vector<double> w;
        double total = 0.0;
        for (const auto& pc : ps) {
            ExtendedReal m = power_integral(pc.a, pc.b, -1.0 - alpha);
            if (m.is_infinite()) fail(ErrorCode::InvalidArgument, "sampling from infinite mass");
            w.push_back(m.value());
            total += m.value();
        }
        if (!(total > 0.0)) fail(ErrorCode::EmptyRegion, "no mass in " + region.describe());
        double pick = uniform01(rng) * total;
        std::size_t i = 0;
        while (i + 1 < w.size() && pick >= w[i]) pick -= w[i++];
        const double x = sample_power(ps[i].a, ps[i].b, alpha, uniform01(rng));
        return ps[i].sign * std::clamp(x, ps[i].a, ps[i].b);
    }
    if (const auto* mx = std::get_if<Mixture>(&k.v)) {
        std::vector<double> w;
        double total = 0.0;
        for (const auto& part : mx->parts) {
            w.push_back(part.weight * mass(*part.kernel, s, region));
            total += w.back();
        }
        if (!(total > 0.0)) fail(ErrorCode::EmptyRegion, "no mass in " + region.describe());
        double pick = uniform01(rng) * total;
        std::size_t i = 0;
        while (i + 1 < w.size() && pick >= w[i]) pick -= w[i++];
        return sample(*mx->parts[i].kernel, s, region, rng);
    }
    const auto atoms = atoms_in(k, s, region);
    double total = 0.0;
    for (const auto& a : atoms) total += a.second;
    if (!(total > 0.0)) fail(ErrorCode::EmptyRegion, "no mass in " + region.describe());
    if (atoms.size() == 1) return atoms[0].first;
    double pick = uniform01(rng) * total;
    std::size_t i = 0;
    while (i + 1 < atoms.size() && pick >= atoms[i].second) pick -= atoms[i++].second;
    return atoms[i].first;
}

std::string describe(const KernelSpec& k) {
    std::ostringstream os;
    os.precision(12);
    std::visit(
        [&](const auto& ker) {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                os << "power-law(alpha=" << ker.alpha.c0;
                if (ker.alpha.c1 != 0.0) os << (ker.alpha.c1 > 0 ? "+" : "") << ker.alpha.c1 << "t";
                if (ker.lower > 0.0) os << ", lower=" << ker.lower;
                os << ", cutoff=" << ker.cutoff << (ker.symmetric ? ", symmetric" : ", positive")
                   << ", scale=" << ker.scale << ")";
            } else if constexpr (std::is_same_v<T, AtomFamily>) {
                os << "atom-family(x_k=" << ker.x_scale << " k^-" << ker.x_pow << " " << ker.x_base
                   << "^-k, m_k=" << ker.m_scale << " k^" << ker.m_pow << " " << ker.m_base << "^k"
                   << (ker.sides == Sides::Both ? ", both sides" : ", positive") << ")";
            } else if constexpr (std::is_same_v<T, AtomList>) {
                os << "atoms(" << ker.atoms.size() << ")";
            } else if constexpr (std::is_same_v<T, SliceAtoms>) {
                os << "slice-atoms(+-" << ker.x_scale << " n^-" << ker.x_pow << ", prob " << ker.prob << ")";
            } else if constexpr (std::is_same_v<T, StepAtom>) {
                os << "step-atom(phi^" << ker.power << (ker.time_changed ? ", tan clock" : "") << ")";
            } else {
                os << "mixture(" << ker.parts.size() << ")";
            }
        },
        k.v);
    return os.str();
}

}  // namespace purejump::kernel

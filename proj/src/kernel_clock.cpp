#include <algorithm>
#include <cmath>
#include <sstream>

#include "purejump/error.hpp"
#include "purejump/kernel.hpp"
#include "purejump/numerics.hpp"

namespace purejump::kernel {

namespace {

using numerics::CompensatedSum;

constexpr long kBigIndex = 1'000'000'000'000'000L;

bool generated_increasing(const FixedTimes& f) { return f.step < 0.0; }

}  // namespace

double atom_time(const FixedTimes& f, long n) {
    if (!f.generated) return f.times.at(static_cast<std::size_t>(n - 1));
    return f.base + f.step * std::pow(static_cast<double>(n), -f.tpow);
}

double atom_weight(const FixedTimes& f, long n) {
    if (!f.generated) return f.weights.at(static_cast<std::size_t>(n - 1));
    return f.weight;
}

std::pair<long, long> atom_index_range(const FixedTimes& f, double t0, double t1) {
    if (!f.generated) {
        long lo = 0, hi = -2;
        for (std::size_t i = 0; i < f.times.size(); ++i) {
            if (f.times[i] > t0 && f.times[i] <= t1) {
                if (lo == 0) lo = static_cast<long>(i) + 1;
                hi = static_cast<long>(i) + 1;
            }
        }
        if (lo == 0) return {1, 0};
        return {lo, hi};
    }
    auto in = [&](long n) {
        const double t = atom_time(f, n);
        return t > t0 && t <= t1;
    };
    // monotone predicates: for increasing t_n the admissible set is an index interval
    auto first_true = [&](auto pred) -> long {
        if (pred(1)) return 1;
        long lo = 1, hi = 2;
        while (hi < kBigIndex && !pred(hi)) {
            lo = hi;
            hi *= 2;
        }
        if (!pred(hi)) return -1;
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            (pred(mid) ? hi : lo) = mid;
        }
        return hi;
    };
    const bool inc = generated_increasing(f);
    const double limit = f.base;  // t_n -> base
    long lo = 0, hi = 0;
    if (inc) {
        lo = first_true([&](long n) { return atom_time(f, n) > t0; });
        if (lo < 0) return {1, 0};
        if (limit <= t1) {
            hi = -1;
        } else {
            const long over = first_true([&](long n) { return atom_time(f, n) > t1; });
            hi = over - 1;
        }
    } else {
        lo = first_true([&](long n) { return atom_time(f, n) <= t1; });
        if (lo < 0) return {1, 0};
        if (limit > t0) {
            hi = -1;
        } else {
            const long below = first_true([&](long n) { return atom_time(f, n) <= t0; });
            hi = below - 1;
        }
    }
    if (hi >= 0 && hi < lo) return {1, 0};
    if (!in(lo)) return {1, 0};
    return {lo, hi};
}

std::vector<std::pair<Slice, double>> clock_atoms(const FixedTimes& f, double t0, double t1, long cap) {
    std::vector<std::pair<Slice, double>> out;
    auto [lo, hi] = atom_index_range(f, t0, t1);
    if (hi >= 0 && hi < lo) return out;
    const long end = hi < 0 ? cap : std::min(hi, cap);
    for (long n = lo; n <= end; ++n) out.push_back({Slice{atom_time(f, n), n}, atom_weight(f, n)});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first.t < b.first.t; });
    return out;
}

bool clock_is_atomic(const ClockSpec& c) { return std::holds_alternative<FixedTimes>(c.v); }

double clock_mass(const ClockSpec& c, double t0, double t1) {
    if (t1 <= t0) return 0.0;
    if (const auto* lb = std::get_if<Lebesgue>(&c.v)) {
        return lb->rate.c0 * (t1 - t0) + 0.5 * lb->rate.c1 * (t1 * t1 - t0 * t0);
    }
    if (const auto* tc = std::get_if<TanChange>(&c.v)) {
        if (t1 >= kHalfPi) return kInf;
        return tc->rate * (std::tan(t1) - std::tan(std::max(t0, 0.0)));
    }
    const auto& f = std::get<FixedTimes>(c.v);
    auto [lo, hi] = atom_index_range(f, t0, t1);
    if (hi >= 0 && hi < lo) return 0.0;
    if (hi < 0) return f.weight > 0.0 ? kInf : 0.0;
    CompensatedSum s;
    for (long n = lo; n <= hi; ++n) s += atom_weight(f, n);
    return s.value();
}

double clock_density(const ClockSpec& c, double t) {
    if (const auto* lb = std::get_if<Lebesgue>(&c.v)) return lb->rate(t);
    if (const auto* tc = std::get_if<TanChange>(&c.v)) {
        if (t >= kHalfPi) return 0.0;
        const double ct = std::cos(t);
        return tc->rate / (ct * ct);
    }
    return 0.0;
}

Slice slice_at(const Component& comp, double t) {
    if (const auto* f = std::get_if<FixedTimes>(&comp.clock.v)) {
        const double tol = 1e-12 * std::max(1.0, std::abs(t));
        auto [lo, hi] = atom_index_range(*f, t - tol, t + tol);
        if (hi >= 0 && hi < lo) return Slice{t, 0};
        return Slice{t, lo};
    }
    return Slice{t, -1};
}

namespace {

DivergenceCertificate slice_divergent(double t, const ExtendedReal& v) {
    std::ostringstream os;
    os.precision(10);
    os << "slice integral infinite at t=" << t;
    if (v.is_infinite()) os << " (" << v.certificate().detail << ")";
    return {DivergenceCertificate::Kind::SliceDivergent, 0, kInf, os.str()};
}

std::vector<double> cut_points(const Component& comp, double t0, double t1,
                               const ClockIntegralOptions& opts) {
    std::vector<double> cuts{t0};
    for (double b : breakpoints(comp.kernel, t0, t1)) cuts.push_back(b);
    for (double b : opts.extra_breaks) {
        if (b > t0 && b < t1) cuts.push_back(b);
    }
    cuts.push_back(t1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

numerics::QuadratureOptions quad_opts(const ClockIntegralOptions& o) {
    numerics::QuadratureOptions q;
    q.abs_tol = o.abs_tol;
    q.rel_tol = o.rel_tol;
    q.max_intervals = 20000;
    return q;
}

// Integral of a finite function over (a, b] against a continuous clock. If the
// segment starts at 0 the neighbourhood of 0 is resolved by dyadic time shells.
template <class F>
ExtendedReal segment_abs(const F& h, double a, double b, bool shells_at_a,
                         const ClockIntegralOptions& opts) {
    const auto q = quad_opts(opts);
    if (!shells_at_a) return ExtendedReal::finite(numerics::integrate(h, a, b, q).value);
    const double len = b - a;
    numerics::ShellOptions so;
    so.converge_tol = 1e-17;
    return numerics::accumulate_shells(
        [&](int k) {
            const double hi = a + len * std::ldexp(1.0, -k);
            const double lo = a + len * std::ldexp(1.0, -k - 1);
            return numerics::integrate(h, lo, hi, q).value;
        },
        so);
}

template <class F>
double segment_signed(const F& h, double a, double b, bool shells_at_a, const ClockIntegralOptions& opts) {
    const auto q = quad_opts(opts);
    if (!shells_at_a) return numerics::integrate(h, a, b, q).value;
    CompensatedSum s, abs_s;
    const double len = b - a;
    int small = 0;
    for (int k = 0; k < 1100; ++k) {
        const double hi = a + len * std::ldexp(1.0, -k);
        const double lo = a + len * std::ldexp(1.0, -k - 1);
        if (!(lo > a)) return s.value();
        const double v = numerics::integrate(h, lo, hi, q).value;
        s += v;
        abs_s += std::abs(v);
        if (std::abs(v) <= 1e-17 * abs_s.value() || (v == 0.0 && abs_s.value() == 0.0 && k > 60)) {
            if (++small >= 8) return s.value();
        } else {
            small = 0;
        }
    }
    fail(ErrorCode::QuadratureFailure, "signed clock integral did not settle near the left endpoint");
}

}  // namespace

ExtendedReal clock_integral(const Component& comp, const std::function<ExtendedReal(const Slice&)>& g,
                            double t0, double t1, const ClockIntegralOptions& opts) {
    if (!(t1 > t0)) return ExtendedReal::finite(0.0);
    if (const auto* f = std::get_if<FixedTimes>(&comp.clock.v)) {
        auto [lo, hi] = atom_index_range(*f, t0, t1);
        if (hi >= 0 && hi < lo) return ExtendedReal::finite(0.0);
        std::optional<DivergenceCertificate> bad;
        auto term = [&](long n) {
            const double w = atom_weight(*f, n);
            if (w == 0.0) return 0.0;
            const Slice s{atom_time(*f, n), n};
            const ExtendedReal v = g(s);
            if (v.is_infinite()) {
                if (!bad) bad = slice_divergent(s.t, v);
                return 0.0;
            }
            return w * v.value();
        };
        std::optional<long> last;
        if (hi >= 0) last = hi;
        numerics::SeriesOptions so;
        so.direct_terms = opts.direct_terms;
        if (hi < 0) {
            // check a few leading slices before summing an infinite series
            for (long n = lo; n < lo + 8; ++n) term(n);
            if (bad) return ExtendedReal::infinite(*bad);
        }
        ExtendedReal r = numerics::sum_series(term, lo, last, so);
        if (bad) return ExtendedReal::infinite(*bad);
        return r;
    }

    const auto cuts = cut_points(comp, t0, t1, opts);

    if (const auto* tc = std::get_if<TanChange>(&comp.clock.v)) {
        // unit cells in u = tan t
        const double rate = tc->rate;
        const double u0 = std::tan(std::max(t0, 0.0));
        const bool unbounded = t1 >= kHalfPi;
        const double u1 = unbounded ? kInf : std::tan(t1);
        // cuts off the integer cell boundaries, in u
        std::vector<double> inner;
        for (double c : cuts) {
            if (!(c > 0.0 && c < kHalfPi)) continue;
            const double uc = std::tan(c);
            if (std::abs(uc - std::round(uc)) > 1e-9 * std::max(1.0, uc)) inner.push_back(uc);
        }
        std::sort(inner.begin(), inner.end());
        std::optional<DivergenceCertificate> bad;
        auto cell = [&](double ua, double ub) -> double {
            if (!(ub > ua)) return 0.0;
            const ExtendedReal mid = g(Slice{std::atan(0.5 * (ua + ub)), -1});
            if (mid.is_infinite()) {
                if (!bad) bad = slice_divergent(std::atan(0.5 * (ua + ub)), mid);
                return 0.0;
            }
            auto h = [&](double u) {
                const ExtendedReal v = g(Slice{std::atan(u), -1});
                if (v.is_infinite()) {
                    if (!bad) bad = slice_divergent(std::atan(u), v);
                    return 0.0;
                }
                return rate * v.value();
            };
            std::vector<double> ucuts{ua};
            for (auto it = std::upper_bound(inner.begin(), inner.end(), ua); it != inner.end() && *it < ub; ++it) {
                ucuts.push_back(*it);
            }
            ucuts.push_back(ub);
            CompensatedSum s;
            for (std::size_t i = 0; i + 1 < ucuts.size(); ++i) {
                s += numerics::integrate(h, ucuts[i], ucuts[i + 1], quad_opts(opts)).value;
            }
            return s.value();
        };
        const double first_end = std::min(u1, std::floor(u0) + 1.0);
        CompensatedSum head;
        head += cell(u0, first_end);
        if (bad) return ExtendedReal::infinite(*bad);
        if (first_end >= u1) return ExtendedReal::finite(head.value());
        const long k0 = static_cast<long>(first_end);  // cells [k, k+1)
        std::optional<long> last;
        if (!unbounded) last = static_cast<long>(std::ceil(u1)) - 1;
        auto term = [&](long k) {
            const double a = static_cast<double>(k);
            return cell(a, std::min(a + 1.0, u1));
        };
        numerics::SeriesOptions so;
        so.direct_terms = opts.direct_terms;
        ExtendedReal tail = numerics::sum_series(term, k0, last, so);
        if (bad) return ExtendedReal::infinite(*bad);
        return ExtendedReal::finite(head.value()) + tail;
    }

    // Lebesgue clock: scan the slice on a grid first.
    const int grid = 256;
    for (int i = 0; i < grid; ++i) {
        const double t = t0 + (t1 - t0) * (i + 0.5) / grid;
        const ExtendedReal v = g(Slice{t, -1});
        if (v.is_infinite()) return ExtendedReal::infinite(slice_divergent(t, v));
    }
    if (opts.constant_in_time && time_independent(comp.kernel)) {
        const ExtendedReal v = g(Slice{0.5 * (t0 + t1), -1});
        return v.scaled(clock_mass(comp.clock, t0, t1));
    }
    std::optional<DivergenceCertificate> bad;
    auto h = [&](double t) {
        const ExtendedReal v = g(Slice{t, -1});
        if (v.is_infinite()) {
            if (!bad) bad = slice_divergent(t, v);
            return 0.0;
        }
        return v.value() * clock_density(comp.clock, t);
    };
    ExtendedReal total = ExtendedReal::finite(0.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += segment_abs(h, cuts[i], cuts[i + 1], i == 0 && cuts[0] == 0.0, opts);
        if (bad) return ExtendedReal::infinite(*bad);
    }
    return total;
}

double clock_integral_signed(const Component& comp, const std::function<double(const Slice&)>& g,
                             double t0, double t1, const ClockIntegralOptions& opts) {
    if (!(t1 > t0)) return 0.0;
    if (const auto* f = std::get_if<FixedTimes>(&comp.clock.v)) {
        auto [lo, hi] = atom_index_range(*f, t0, t1);
        if (hi >= 0 && hi < lo) return 0.0;
        auto val = [&](long n) { return atom_weight(*f, n) * g(Slice{atom_time(*f, n), n}); };
        if (hi >= 0) {
            CompensatedSum s;
            for (long n = lo; n <= hi; ++n) s += val(n);
            return s.value();
        }
        numerics::SeriesOptions so;
        so.direct_terms = opts.direct_terms;
        const ExtendedReal pos = numerics::sum_series([&](long n) { return std::max(val(n), 0.0); }, lo, {}, so);
        const ExtendedReal neg = numerics::sum_series([&](long n) { return std::max(-val(n), 0.0); }, lo, {}, so);
        if (pos.is_infinite() || neg.is_infinite()) {
            fail(ErrorCode::NotSigmaIntegrable, "signed clock series not absolutely convergent");
        }
        return pos.value() - neg.value();
    }
    const auto cuts = cut_points(comp, t0, t1, opts);
    if (const auto* tc = std::get_if<TanChange>(&comp.clock.v)) {
        if (t1 >= kHalfPi) {
            const double u0 = std::tan(std::max(t0, 0.0));
            auto cellf = [&](double ua, double ub) {
                return numerics::integrate([&](double u) { return tc->rate * g(Slice{std::atan(u), -1}); },
                                           ua, ub, quad_opts(opts)).value;
            };
            const double first_end = std::floor(u0) + 1.0;
            double head = cellf(u0, first_end);
            const long k0 = static_cast<long>(first_end);
            numerics::SeriesOptions so;
            so.direct_terms = opts.direct_terms;
            auto cell = [&](long k) { return cellf(static_cast<double>(k), static_cast<double>(k) + 1.0); };
            const ExtendedReal pos = numerics::sum_series([&](long k) { return std::max(cell(k), 0.0); }, k0, {}, so);
            const ExtendedReal neg = numerics::sum_series([&](long k) { return std::max(-cell(k), 0.0); }, k0, {}, so);
            if (pos.is_infinite() || neg.is_infinite()) {
                fail(ErrorCode::NotSigmaIntegrable, "signed clock series not absolutely convergent");
            }
            return head + pos.value() - neg.value();
        }
    }
    auto h = [&](double t) { return g(Slice{t, -1}) * clock_density(comp.clock, t); };
    if (opts.constant_in_time && time_independent(comp.kernel)) {
        return g(Slice{0.5 * (t0 + t1), -1}) * clock_mass(comp.clock, t0, t1);
    }
    CompensatedSum s;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        s += segment_signed(h, cuts[i], cuts[i + 1], i == 0 && cuts[0] == 0.0, opts);
    }
    return s.value();
}

std::string describe(const ClockSpec& c) {
    std::ostringstream os;
    os.precision(12);
    if (const auto* lb = std::get_if<Lebesgue>(&c.v)) {
        os << "lebesgue(rate=" << lb->rate.c0;
        if (lb->rate.c1 != 0.0) os << "+" << lb->rate.c1 << "t";
        os << ")";
    } else if (const auto* tc = std::get_if<TanChange>(&c.v)) {
        os << "tan-change(rate=" << tc->rate << ")";
    } else {
        const auto& f = std::get<FixedTimes>(c.v);
        if (f.generated) {
            os << "fixed-times(t_n=" << f.base << (f.step < 0 ? "-" : "+") << std::abs(f.step) << " n^-"
               << f.tpow << ", w=" << f.weight << ")";
        } else {
            os << "fixed-times(" << f.times.size() << " atoms)";
        }
    }
    return os.str();
}

}  // namespace purejump::kernel

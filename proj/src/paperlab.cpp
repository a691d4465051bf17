#include "purejump/paperlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "purejump/error.hpp"
#include "purejump/numerics.hpp"

namespace purejump::paperlab {

using boost::multiprecision::cpp_int;

// ---- drift pinning -----------------------------------------------------------

PinningReport drift_pinning_bruteforce(int K) {
    if (K < 1) fail(ErrorCode::InvalidArgument, "K must be at least 1");
    if (K > 12) fail(ErrorCode::BudgetExceeded, "enumeration of 4^K selections is capped at K = 12");
    const std::uint32_t n = 1u << K;
    std::vector<cpp_int> pow3(static_cast<std::size_t>(K) + 1);
    pow3[0] = 1;
    for (int j = 1; j <= K; ++j) pow3[static_cast<std::size_t>(j)] = pow3[static_cast<std::size_t>(j) - 1] * 3;
    std::vector<cpp_int> sums(n);
    for (std::uint32_t m = 1; m < n; ++m) {
        const int low = __builtin_ctz(m);
        sums[m] = sums[m & (m - 1)] + pow3[static_cast<std::size_t>(low) + 1];
    }
    PinningReport r;
    r.K = K;
    cpp_int best_num = -1;
    int best_k = 0;
    std::uint32_t best_p = 0, best_m = 0;
    cpp_int v;
    for (std::uint32_t p = 0; p < n; ++p) {
        for (std::uint32_t m = 0; m < n; ++m) {
            const std::uint32_t diff = p ^ m;
            if (diff == 0) continue;
            ++r.pairs;
            const int k = 32 - __builtin_clz(diff);
            v = sums[p] - sums[m];
            if (v < 0) v = -v;
            // v / 3^k < best / 3^best_k
            if (best_num < 0 || v * pow3[static_cast<std::size_t>(best_k)] < best_num * pow3[static_cast<std::size_t>(k)]) {
                best_num = v;
                best_k = k;
                best_p = p;
                best_m = m;
            }
        }
    }
    const cpp_int& den = pow3[static_cast<std::size_t>(best_k)];
    r.min_numerator = best_num.str();
    r.min_denominator = den.str();
    r.min_ratio = static_cast<double>(best_num) / static_cast<double>(den);
    r.min_index = best_k;
    r.at_least_half = 2 * best_num >= den;
    for (int j = 0; j < K; ++j) {
        if (best_p >> j & 1u) r.worst_plus.push_back(j + 1);
        if (best_m >> j & 1u) r.worst_minus.push_back(j + 1);
    }
    return r;
}

// ---- drift steering ----------------------------------------------------------

namespace {

/// sup{eps > 0 : q(eps) >= r} for q nonincreasing with q = 0 above 1. +inf when r <= 0.
double sup_level(const std::function<double(double)>& q, double r) {
    if (r <= 0.0) return kInf;
    if (q(1.0) >= r) return 1.0;
    auto h = [&](double u) { return q(std::exp(-u)) - r; };
    double hi = 1.0;
    while (h(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 700.0) fail(ErrorCode::RootFindFailure, "partial mean stays below the level down to exp(-700)");
    }
    numerics::RootOptions o;
    o.xtol = 1e-15;
    const double u = numerics::brent(h, 0.0, hi, o);
    return std::exp(-u);
}

struct SideMoments {
    const KernelSpec* k;
    Slice s;
    double sign;  // +1: positive side steered

    Region own(double a, double b) const {
        return sign > 0 ? Region::positive(a, b, true, true) : Region::negative(-b, -a, true, true);
    }
    Region other(double a, double b) const {
        return sign > 0 ? Region::negative(-b, -a, true, true) : Region::positive(a, b, true, true);
    }
    // int x 1_[eps,1] in the steered frame
    double P(double eps) const {
        if (eps > 1.0) return 0.0;
        return kernel::moment(*k, s, 1.0, own(eps, 1.0)).absolute.value();
    }
    // int |x| 1_[-1,-eps] in the steered frame
    double N(double eps) const {
        if (eps > 1.0) return 0.0;
        return kernel::moment(*k, s, 1.0, other(eps, 1.0)).absolute.value();
    }
    double atom_at(double x) const {
        if (!kernel::is_atomic(*k) || !(x <= 1.0)) return 0.0;
        return kernel::mass(*k, s, own(x, x));
    }
    double c_level() const {
        double c = 2.0;
        if (!kernel::is_atomic(*k)) return c;
        for (int j = -1; j < 200; ++j) {
            const double hi = std::ldexp(1.0, -j), lo = std::ldexp(1.0, -j - 1);
            Region band = sign > 0 ? Region::positive(lo, hi, false, true) : Region::negative(-hi, -lo, true, false);
            for (const auto& [x, m] : kernel::atoms_in(*k, s, band)) {
                if (std::abs(x) * m > 1.0) c = std::min(c, std::abs(x));
            }
        }
        return c;
    }
};

std::vector<std::pair<double, double>> steer_cells(const Component& c, double T) {
    std::vector<double> b{0.0, T};
    if (!kernel::time_independent(c.kernel) || kernel::clock_is_atomic(c.clock)) {
        for (int i = 1; i < 16; ++i) b.push_back(T * i / 16.0);
        for (double x : kernel::breakpoints(c.kernel, 0.0, T)) b.push_back(x);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < b.size(); ++i) out.push_back({b[i - 1], b[i]});
    return out;
}

}  // namespace

double TruncationPolicy::max_residual() const {
    double m = 0.0;
    for (const auto& c : cells)
        for (const auto& s : c.steps) m = std::max(m, s.residual);
    return m;
}

bool TruncationPolicy::within_band(double tol) const {
    for (const auto& c : cells) {
        if (c.in_d) continue;
        for (const auto& s : c.steps) {
            const double lo = mirrored ? beta - s.atom_term : beta;
            const double hi = mirrored ? beta : beta + s.atom_term;
            if (s.beta_k < lo - tol || s.beta_k > hi + tol) return false;
            if (s.beta_k < beta - 1.0 - tol || s.beta_k > beta + 1.0 + tol) return false;
        }
    }
    return true;
}

bool TruncationPolicy::monotone() const {
    for (const auto& c : cells) {
        for (std::size_t i = 0; i < c.steps.size(); ++i) {
            if (!(c.steps[i].f > 0.0) || !(c.steps[i].g > 0.0)) return false;
            if (i > 0 && (c.steps[i].f > c.steps[i - 1].f || c.steps[i].g > c.steps[i - 1].g)) return false;
        }
    }
    return true;
}

std::string TruncationPolicy::to_text() const {
    std::ostringstream os;
    os.precision(12);
    os << "target beta = " << beta << ", K = " << K << (mirrored ? ", mirrored" : "") << "\n";
    for (const auto& n : notes) os << "  note: " << n << "\n";
    for (const auto& c : cells) {
        os << "cell (" << c.t0 << ", " << c.t1 << "]";
        if (c.in_d) {
            os << ": truncated mean finite, drift " << c.target << "\n";
            continue;
        }
        os << ": c = " << c.c << ", d = " << c.d << "\n";
        for (const auto& s : c.steps) {
            os << "  k=" << s.k << " f=" << s.f << " g=" << s.g << " beta_k=" << s.beta_k << " residual=" << s.residual
               << "\n";
        }
    }
    return os.str();
}

TruncationPolicy steer_drift(const CompensatorSpec& comp, double beta_target, int K, int component) {
    if (K < 1) fail(ErrorCode::InvalidArgument, "K must be at least 1");
    if (!std::isfinite(beta_target)) fail(ErrorCode::InvalidArgument, "target drift must be finite");
    if (component < 0 || static_cast<std::size_t>(component) >= comp.components.size())
        fail(ErrorCode::InvalidArgument, "no such component");
    kernel::validate(comp);
    const Component& c = comp.components[static_cast<std::size_t>(component)];

    const auto above = kernel::atom_limsup_vanishes(comp, kernel::Side::FromAbove, component);
    const auto below = kernel::atom_limsup_vanishes(comp, kernel::Side::FromBelow, component);
    if (!above.vanishes && !below.vanishes) {
        fail(ErrorCode::HypothesisViolation,
             "atom condition fails on both sides: " + above.witness + "; " + below.witness);
    }
    TruncationPolicy pol;
    pol.beta = beta_target;
    pol.K = K;
    pol.mirrored = !above.vanishes;
    const double sgn = pol.mirrored ? -1.0 : 1.0;
    const double b = sgn * beta_target;  // target in the steered frame
    if (b < 0.0) pol.notes.push_back("target below zero in the steered frame; the construction is run as stated");
    if (pol.mirrored) pol.notes.push_back("positive side atoms do not vanish; thresholds built on the mirror image");

    for (const auto& [t0, t1] : steer_cells(c, comp.horizon)) {
        SteerCell cell;
        cell.t0 = t0;
        cell.t1 = t1;
        const SideMoments sm{&c.kernel, kernel::slice_at(c, 0.5 * (t0 + t1)), sgn};
        const bool pos_fin = kernel::moment(c.kernel, sm.s, 1.0, Region::positive(0.0, 1.0)).absolute.is_finite();
        const bool neg_fin = kernel::moment(c.kernel, sm.s, 1.0, Region::negative(-1.0, 0.0, true, false)).absolute.is_finite();
        if (pos_fin != neg_fin) {
            std::ostringstream os;
            os << "the truncated mean diverges on one side only at t = " << 0.5 * (t0 + t1);
            fail(ErrorCode::HypothesisViolation, os.str());
        }
        if (pos_fin) {
            cell.in_d = true;
            cell.target = kernel::moment(c.kernel, sm.s, 1.0, Region::small_jumps()).signed_value;
            pol.cells.push_back(std::move(cell));
            continue;
        }
        cell.target = beta_target;
        cell.c = sm.c_level();
        const double pc = sm.P(cell.c);
        cell.d = sup_level([&](double e) { return sm.N(e); }, pc - b);
        for (int k = 1; k <= K; ++k) {
            SteerStep st;
            st.k = k;
            st.g = std::min(cell.d, 1.0 / k);
            const double ng = sm.N(st.g);
            st.f = std::min({sup_level([&](double e) { return sm.P(e); }, b + ng), cell.c, 1.0});
            st.atom_term = st.f * sm.atom_at(st.f);
            st.beta_k = sgn * (sm.P(st.f) - ng);
            st.residual = std::abs(st.beta_k - beta_target);
            cell.steps.push_back(st);
        }
        pol.cells.push_back(std::move(cell));
    }
    return pol;
}

// ---- threshold construction for the ucp class ---------------------------------

double PiecewiseLinear::operator()(double s) const {
    if (t.empty()) return 0.0;
    if (s <= t.front()) return x.front();
    if (s >= t.back()) return x.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    return x[i - 1] + w * (x[i] - x[i - 1]);
}

PiecewiseLinear stopped_brownian(double T, int steps, std::mt19937_64& rng) {
    if (!(T > 0.0) || steps < 1) fail(ErrorCode::InvalidArgument, "need T > 0 and at least one step per unit");
    const long n = static_cast<long>(std::ceil(T * steps - 1e-9));
    const double h = 1.0 / steps;
    std::normal_distribution<double> z(0.0, std::sqrt(h));
    PiecewiseLinear w;
    w.t.reserve(static_cast<std::size_t>(n) + 1);
    w.x.reserve(static_cast<std::size_t>(n) + 1);
    w.t.push_back(0.0);
    w.x.push_back(0.0);
    bool stopped = false;
    double cur = 0.0;
    for (long i = 1; i <= n; ++i) {
        if (!stopped) {
            cur += z(rng);
            if (std::abs(cur) > 1.0) {
                cur = cur > 0.0 ? 1.0 : -1.0;
                stopped = true;
            }
        }
        w.t.push_back(std::min(T, static_cast<double>(i) * h));
        w.x.push_back(cur);
    }
    return w;
}

PiecewiseLinear trailing_drift(const PiecewiseLinear& w, int n, double T) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "mesh count must be positive");
    const long m = static_cast<long>(std::ceil(T * n - 1e-9));
    PiecewiseLinear b;
    for (long k = 0; k <= m + 1; ++k) {
        b.t.push_back(static_cast<double>(k) / n);
        b.x.push_back(k <= 1 ? 0.0 : w(static_cast<double>(k - 1) / n));
    }
    return b;
}

namespace {

struct PowerSide {
    double a = 1.0, scale = 1.0, log_cut = 0.0;

    /// scale int_{e^l}^{cut} x^{-a} dx, zero when e^l >= cut.
    double mean(double l) const {
        if (l >= log_cut) return 0.0;
        if (a == 1.0) return scale * (log_cut - l);
        const double e = a - 1.0;
        return scale / e * (std::exp(-e * l) - std::exp(-e * log_cut));
    }
    /// mean over (e^l, e^lbar) between two logs, l < lbar.
    double between(double l, double lbar) const {
        const double hi = std::min(lbar, log_cut);
        if (l >= hi) return 0.0;
        if (a == 1.0) return scale * (hi - l);
        const double e = a - 1.0;
        return scale / e * std::exp(-e * l) * -std::expm1(-e * (hi - l));
    }
    /// l < lbar with between(l, lbar) = v > 0.
    double solve(double lbar, double v) const {
        const double hi = std::min(lbar, log_cut);
        if (a == 1.0) return hi - v / scale;
        const double e = a - 1.0;
        const double A = -e * hi, B = std::log(e * v / scale);
        const double m = std::max(A, B);
        return -(m + std::log(std::exp(A - m) + std::exp(B - m))) / e;
    }
};

PowerSide power_side(const KernelSpec& F) {
    const auto* pl = std::get_if<PowerLaw>(&F.v);
    if (!pl) fail(ErrorCode::HypothesisViolation, "threshold construction needs a power-law kernel");
    if (!pl->symmetric) fail(ErrorCode::HypothesisViolation, "kernel must be symmetric");
    if (pl->lower > 0.0) fail(ErrorCode::HypothesisViolation, "kernel must reach 0 (lower cutoff set)");
    if (!pl->alpha.is_constant()) fail(ErrorCode::HypothesisViolation, "kernel must be time-homogeneous");
    if (pl->cutoff > 1.0) fail(ErrorCode::HypothesisViolation, "jumps must be bounded by 1");
    if (pl->alpha.c0 < 1.0) fail(ErrorCode::HypothesisViolation, "one-sided mean is finite for alpha < 1");
    return PowerSide{pl->alpha.c0, pl->scale, std::log(pl->cutoff)};
}

double drift_of(const PowerSide& p, double lf, double lg) {
    if (p.a == 1.0) {
        // both logs on the same side of the cutoff keep this exact
        return p.mean(lf) - p.mean(lg);
    }
    if (lf < lg) return p.between(lf, lg);
    if (lg < lf) return -p.between(lg, lf);
    return 0.0;
}

double rel_residual(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

struct Frac {
    long p, q;
    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool operator<(const Frac& o) const { return p * o.q < o.p * q; }
    bool operator==(const Frac& o) const { return p * o.q == o.p * q; }
};

}  // namespace

ThresholdUpdate prop61_step(const KernelSpec& F, double log_fbar, double log_gbar, double b_bar) {
    const PowerSide ps = power_side(F);
    ThresholdUpdate u{log_fbar, log_gbar, 0.0};
    if (b_bar > 0.0) {
        u.log_f = ps.solve(log_fbar, b_bar);
        u.residual = rel_residual(ps.between(u.log_f, log_fbar), b_bar);
    } else if (b_bar < 0.0) {
        u.log_g = ps.solve(log_gbar, -b_bar);
        u.residual = rel_residual(ps.between(u.log_g, log_gbar), -b_bar);
    }
    return u;
}

Prop61Result prop61_thresholds(const KernelSpec& F, const PiecewiseLinear& w, int N, double T) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "N must be positive");
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    const PowerSide ps = power_side(F);
    Prop61Result res;
    // level 0: f = g = 1 on [0, T)
    std::vector<Frac> breaks{{0, 1}};
    std::vector<double> lf{0.0}, lg{0.0};
    for (int n = 1; n <= N; ++n) {
        std::vector<Frac> nb = breaks;
        for (long k = 1; static_cast<double>(k) / n < T; ++k) nb.push_back({k, n});
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        for (auto& f : nb) {
            const long g = std::gcd(f.p, f.q);
            f = {f.p / g, f.q / g};
        }
        const PiecewiseLinear B = trailing_drift(w, n, T);
        const double cap = -std::log(static_cast<double>(n));
        ThresholdLevel lvl;
        lvl.n = n;
        lvl.max_log_threshold = -kInf;
        std::vector<double> nf(nb.size()), ng(nb.size());
        std::size_t old = 0;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            while (old + 1 < breaks.size() && !(nb[i] < breaks[old + 1])) ++old;
            const long k = nb[i].p * n / nb[i].q;  // cell of mesh 1/n
            const double b = static_cast<double>(n) * (B(static_cast<double>(k + 1) / n) - B(static_cast<double>(k) / n));
            const double fbar = std::min(lf[old], cap), gbar = std::min(lg[old], cap);
            const double bbar = b - drift_of(ps, fbar, gbar);
            const ThresholdUpdate u = prop61_step(F, fbar, gbar, bbar);
            nf[i] = u.log_f;
            ng[i] = u.log_g;
            ThresholdCell cell;
            cell.t0 = nb[i].value();
            cell.t1 = i + 1 < nb.size() ? nb[i + 1].value() : T;
            cell.log_f = u.log_f;
            cell.log_g = u.log_g;
            cell.b = b;
            cell.residual = rel_residual(drift_of(ps, u.log_f, u.log_g), b);
            lvl.max_residual = std::max(lvl.max_residual, cell.residual);
            lvl.max_log_threshold = std::max({lvl.max_log_threshold, u.log_f, u.log_g});
            if (u.log_f > lf[old] || u.log_g > lg[old]) res.nonincreasing = false;
            if (!(u.log_f <= cap + 1e-12) || !(u.log_g <= cap + 1e-12) || !std::isfinite(u.log_f) ||
                !std::isfinite(u.log_g))
                res.within_mesh = false;
            lvl.cells.push_back(cell);
        }
        breaks = std::move(nb);
        lf = std::move(nf);
        lg = std::move(ng);
        res.max_residual = std::max(res.max_residual, lvl.max_residual);
        res.levels.push_back(std::move(lvl));
    }
    return res;
}

}  // namespace purejump::paperlab

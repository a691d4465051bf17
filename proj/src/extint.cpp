#include "purejump/extint.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "purejump/error.hpp"
#include "purejump/numerics.hpp"
#include "purejump/simulate.hpp"

namespace purejump {

namespace {

long atom_cap(const FixedTimes& f) { return f.generated ? f.n_max : LONG_MAX; }

[[noreturn]] void not_sigma(const FlagResult& r, const std::string& what) {
    std::string msg = what + " not sigma-integrable";
    if (!r.witness.condition.empty()) msg += ": " + r.witness.condition;
    if (!r.witness.detail.empty()) msg += " (" + r.witness.detail + ")";
    fail(ErrorCode::NotSigmaIntegrable, msg);
}

double slice_signed(const KernelSpec& k, const Slice& s, const Integrand& eta, EtaPart part,
                    const std::optional<Region>& extra) {
    const SliceIntegral si = slice_integral(k, s, eta, part, extra);
    if (!si.absolute.is_finite()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "slice integral infinite at t=%.6g", s.t);
        fail(ErrorCode::NotSigmaIntegrable, buf);
    }
    return si.signed_value;
}

std::vector<double> merged_knots(std::vector<double> knots, const TimeFunction& z) {
    if (knots.empty()) return knots;
    if (z.kind() == TimeFunction::Kind::Step) {
        for (double b : z.breakpoints(knots.front(), knots.back())) knots.push_back(b);
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    }
    return knots;
}

// |c| sup|x|^p over the region parts.
Region image_region(const Integrand& eta, const Region& r) {
    if (r.is_empty() || eta.is_zero()) return Region();
    if (!eta.zeta.is_constant() || eta.region) return Region();
    double th = 0.0;
    for (const auto& iv : r.parts()) th = std::max({th, std::abs(iv.lo), std::abs(iv.hi)});
    const double c = std::abs(eta.coef * eta.zeta(0.0));
    const double hi = std::isinf(th) ? kInf : c * std::pow(th, eta.p);
    if (eta.odd) return Region::abs_band(0.0, hi, false, !std::isinf(hi));
    return Region::positive(0.0, hi, false, !std::isinf(hi));
}

FvCurve continuous_part(const FvCurve& c) { return FvCurve(c.knots(), c.values()); }

// int z d(curve) as a curve on knots merged with z's breaks.
FvCurve integrate_curve(const TimeFunction& z, const FvCurve& c) {
    const FvCurve cont = continuous_part(c);
    std::vector<double> knots = merged_knots(c.knots(), z);
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) values[i] = cont.integrate(z, knots[i]);
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : c.atoms()) atoms.push_back({a.first, z(a.first) * a.second});
    return FvCurve(std::move(knots), std::move(values), std::move(atoms));
}

}  // namespace

FvCurve nu_curve(const Integrand& eta, const CompensatorSpec& comp, const std::vector<double>& knots_in,
                 EtaPart part, const std::optional<Region>& extra) {
    if (eta.is_zero()) return FvCurve();
    const std::vector<double> knots = merged_knots(knots_in, eta.zeta);
    std::vector<double> values;
    std::vector<std::pair<double, double>> atoms;
    const double T = comp.horizon;
    for (const auto& c : comp.components) {
        if (const auto* f = std::get_if<FixedTimes>(&c.clock.v)) {
            const double t1 = knots.empty() ? T : knots.back();
            for (const auto& [s, w] : kernel::clock_atoms(*f, 0.0, t1, atom_cap(*f))) {
                if (w == 0.0) continue;
                const double v = w * slice_signed(c.kernel, s, eta, part, extra);
                if (v != 0.0) atoms.push_back({s.t, v});
            }
            continue;
        }
        if (knots.empty()) continue;
        // slices with infinite mass are a null set once membership holds
        auto g = [&](const Slice& s) {
            const SliceIntegral si = slice_integral(c.kernel, s, eta, part, extra);
            return si.absolute.is_finite() ? si.signed_value : 0.0;
        };
        std::vector<double> v(knots.size(), 0.0);
        if (kernel::time_independent(c.kernel) && eta.zeta.is_constant()) {
            const double gv = g(Slice{0.0, -1});
            if (gv != 0.0) {
                for (std::size_t i = 0; i < knots.size(); ++i) v[i] = gv * kernel::clock_mass(c.clock, 0.0, knots[i]);
            }
        } else {
            kernel::ClockIntegralOptions opts;
            opts.constant_in_time = eta.zeta.is_constant();
            numerics::CompensatedSum acc;
            for (std::size_t i = 1; i < knots.size(); ++i) {
                acc += kernel::clock_integral_signed(c, g, knots[i - 1], knots[i], opts);
                v[i] = acc.value();
            }
        }
        if (values.empty()) values.assign(knots.size(), 0.0);
        for (std::size_t i = 0; i < knots.size(); ++i) values[i] += v[i];
    }
    if (values.empty()) return FvCurve({}, {}, std::move(atoms));
    return FvCurve(knots, std::move(values), std::move(atoms));
}

FvCurve star_nu(const Integrand& eta, const CompensatorSpec& comp_in, double T, int grid) {
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    CompensatorSpec comp = comp_in;
    comp.horizon = T;
    const FlagResult m = l_sigma_nu_member(eta, comp);
    if (m.non_member()) not_sigma(m, eta.describe());
    SimOptions o;
    o.grid = grid;
    return nu_curve(eta, comp, simulation_knots(comp, o));
}

SamplePath star_mu_on_path(const Integrand& eta, const SamplePath& path, const CompensatorSpec& comp,
                           bool check) {
    if (check) {
        const FlagResult m = l_sigma_mu_member(eta, comp);
        if (m.non_member()) not_sigma(m, eta.describe());
    }
    SamplePath r;
    r.horizon = path.horizon;
    r.seed = path.seed;
    r.index = path.index;
    r.knots = path.knots;
    for (const auto& e : path.events) {
        const double v = eta(e.t, e.dx);
        if (v != 0.0) r.events.push_back(Event{e.t, v, e.level, e.component});
    }
    if (!path.omitted.is_empty() && !eta.is_zero()) {
        CompensatorSpec c = comp;
        c.horizon = path.horizon;
        auto tail = std::make_shared<FvCurve>(nu_curve(eta, c, *path.knots, EtaPart::Small, path.omitted));
        r.fv = tail;
        r.drift = tail;
    }
    r.omitted = image_region(eta, path.omitted);
    r.finalize();
    return r;
}

FlagResult zeta_integrable(const TimeFunction& zeta, const CompensatorSpec& comp) {
    FlagResult r;
    r.witness.condition = "int |zeta| |dB| < inf";
    const double T = comp.horizon;
    if (std::isfinite(zeta.sup_abs(T))) {
        r.flag = Membership::Member;
        r.witness.detail = "zeta bounded on the horizon";
        return r;
    }
    const bool matching = comp.drift.mode == DriftSpec::Mode::Matching;
    try {
        ExtendedReal total = ExtendedReal::finite(0.0);
        for (const auto& c : comp.components) {
            auto g = [&](const Slice& s) -> ExtendedReal {
                const double z = std::abs(zeta(s.t));
                if (z == 0.0) return ExtendedReal::finite(0.0);
                double b = 0.0;
                if (matching) {
                    const auto m = kernel::moment(c.kernel, s, 1.0, Region::small_jumps());
                    if (!m.absolute.is_finite()) return m.absolute;
                    b = std::abs(m.signed_value);
                } else {
                    b = std::abs(comp.drift.beta(s.t));
                }
                return ExtendedReal::finite(z * b);
            };
            kernel::ClockIntegralOptions opts;
            if (zeta.kind() == TimeFunction::Kind::Step) opts.extra_breaks = zeta.breakpoints(0.0, T);
            total += kernel::clock_integral(c, g, 0.0, T, opts);
        }
        r.witness.value = total;
        if (total.is_finite()) {
            r.flag = Membership::Member;
            r.witness.detail = "finite";
        } else {
            r.flag = Membership::NonMember;
            r.witness.detail = total.describe();
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::QuadratureFailure && e.code() != ErrorCode::UnknownAsymptotics) throw;
        r.flag = Membership::Undecided;
        r.witness.detail = e.what();
    }
    return r;
}

SamplePath stoch_integral(const TimeFunction& zeta, const SamplePath& path, const CompensatorSpec* comp) {
    if (comp) {
        const FlagResult m = zeta_integrable(zeta, *comp);
        if (m.non_member()) {
            fail(ErrorCode::NotIntegrable, "zeta not in L(X): " + m.witness.condition + " fails (" + m.witness.detail + ")");
        }
    }
    const double sup = zeta.sup_abs(path.horizon);
    if (!std::isfinite(sup)) fail(ErrorCode::NotIntegrable, "integrand unbounded on the path horizon");
    SamplePath r;
    r.horizon = path.horizon;
    r.seed = path.seed;
    r.index = path.index;
    r.knots = path.knots;
    r.qv_tail = path.qv_tail * sup * sup;
    for (const auto& e : path.events) {
        const double v = zeta(e.t) * e.dx;
        if (v != 0.0) r.events.push_back(Event{e.t, v, e.level, e.component});
    }
    r.fv = std::make_shared<FvCurve>(integrate_curve(zeta, *path.fv));
    r.drift = path.drift == path.fv ? r.fv : std::make_shared<FvCurve>(integrate_curve(zeta, *path.drift));
    r.finalize();
    return r;
}

TransformResult transform_path(const SmoothFunction& f, const SamplePath& y, const CompensatorSpec* comp) {
    if (comp) {
        const FlagResult m = l_sigma_mu_member(Integrand::identity(), *comp);
        if (m.non_member()) fail(ErrorCode::TransformDivergence, "x is not sigma-integrable against mu: " + m.witness.detail);
    }
    TransformResult out;
    out.times = y.sup_times(y.horizon);
    const double f0 = f.f(y.x0);
    SamplePath& s = out.star;
    s.x0 = f0;
    s.horizon = y.horizon;
    s.seed = y.seed;
    s.index = y.index;
    s.knots = y.knots;
    std::vector<double> knots, values;
    std::vector<std::pair<double, double>> atoms;
    numerics::CompensatedSum cont;
    std::size_t ev = 0;
    double prev = y.x0;  // Y at the previous time point
    for (double t : out.times) {
        const double yl = t > 0.0 ? y.left(t) : y.x0;
        // continuous FV motion since the previous point
        cont += f.f(yl) - f.f(prev);
        knots.push_back(t);
        values.push_back(cont.value());
        double cur = yl;
        if (ev < y.events.size() && y.events[ev].t == t) {
            const double dx = y.events[ev].dx;
            const double xi = f.f(cur + dx) - f.f(cur);
            if (!std::isfinite(xi)) fail(ErrorCode::TransformDivergence, "transform not finite along the path");
            if (xi != 0.0) s.events.push_back(Event{t, xi, y.events[ev].level, y.events[ev].component});
            cur += dx;
            ++ev;
        }
        const double yt = y.value(t);
        if (yt != cur) atoms.push_back({t, f.f(yt) - f.f(cur)});
        prev = yt;
        out.direct.push_back(f.f(yt));
    }
    if (!std::isfinite(cont.value())) fail(ErrorCode::TransformDivergence, "transform not finite along the path");
    s.fv = std::make_shared<FvCurve>(std::move(knots), std::move(values), std::move(atoms));
    s.drift = s.fv;
    s.finalize();
    double d = 0.0;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        d = std::max(d, std::abs(out.direct[i] - s.value(out.times[i])));
        if (out.times[i] > 0.0) d = std::max(d, std::abs(f.f(y.left(out.times[i])) - s.left(out.times[i])));
    }
    out.max_discrepancy = d;
    return out;
}

CompensatorSpec image_spec(const Integrand& eta, const CompensatorSpec& comp) {
    if (!eta.zeta.is_constant() || eta.region) {
        fail(ErrorCode::InvalidArgument, "image spec needs a time-constant integrand without region");
    }
    const double c = eta.coef * eta.zeta(0.0);
    if (c == 1.0 && eta.p == 1.0 && eta.odd) return comp;
    CompensatorSpec out = comp;
    out.name = comp.name + "/image";
    for (auto& k : out.components) k.kernel = kernel::push_forward(k.kernel, c, eta.p, eta.odd);
    out.drift.mode = DriftSpec::Mode::Matching;
    return out;
}

double path_discrepancy(const SamplePath& a, const SamplePath& b, int grid) {
    const double T = std::min(a.horizon, b.horizon);
    std::vector<double> ts = a.sup_times(T, grid);
    const auto tb = b.sup_times(T, grid);
    ts.insert(ts.end(), tb.begin(), tb.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    double d = 0.0;
    for (double t : ts) {
        d = std::max(d, std::abs(a.value(t) - b.value(t)));
        if (t > 0.0) d = std::max(d, std::abs(a.left(t) - b.left(t)));
    }
    return d;
}

std::string AssociativityReport::to_text() const {
    std::ostringstream os;
    os << law << ": lhs " << membership_name(lhs.flag) << ", rhs " << membership_name(rhs.flag);
    if (paths) os << ", max discrepancy " << max_discrepancy << " over " << paths << " paths";
    os << (ok ? " [ok]" : " [FAIL]");
    return os.str();
}

namespace {

void gate(AssociativityReport& r) {
    const bool l = r.lhs.non_member(), rr = r.rhs.non_member();
    if (l && rr) fail(ErrorCode::NotSigmaIntegrable, r.law + ": both sides fail (" + r.lhs.witness.detail + ")");
    if (l) fail(ErrorCode::NotSigmaIntegrable, r.law + ": left side fails, right side does not (" + r.lhs.witness.detail + ")");
    if (rr) fail(ErrorCode::NotSigmaIntegrable, r.law + ": right side fails, left side does not (" + r.rhs.witness.detail + ")");
}

}  // namespace

AssociativityReport check_associativity(const Integrand& eta, const TimeFunction& zeta,
                                        const CompensatorSpec& comp, const Ensemble& ens) {
    AssociativityReport r;
    r.law = "zeta.(eta*mu) = (zeta eta)*mu";
    const Integrand ze = eta.times(zeta);
    r.lhs = l_sigma_mu_member(eta, comp);
    if (!r.lhs.non_member() && !std::isfinite(zeta.sup_abs(comp.horizon))) {
        CompensatorSpec img = comp;
        try {
            img = image_spec(eta, comp);
        } catch (const Error&) {
        }
        const FlagResult z = zeta_integrable(zeta, img);
        if (!z.member()) r.lhs = z;
    }
    r.rhs = l_sigma_mu_member(ze, comp);
    gate(r);
    for (const auto& x : ens.paths) {
        const SamplePath y = star_mu_on_path(eta, x, comp, false);
        const SamplePath lhs = stoch_integral(zeta, y);
        const SamplePath rhs = star_mu_on_path(ze, x, comp, false);
        r.max_discrepancy = std::max(r.max_discrepancy, path_discrepancy(lhs, rhs));
        ++r.paths;
    }
    r.ok = r.max_discrepancy <= 1e-10;
    return r;
}

AssociativityReport check_associativity(const Integrand& eta, const Integrand& psi,
                                        const CompensatorSpec& comp, const Ensemble& ens) {
    AssociativityReport r;
    r.law = "psi*(eta*mu) = psi(eta)*mu";
    const CompensatorSpec img = image_spec(eta, comp);
    const Integrand pe = eta.compose_into(psi);
    r.lhs = l_sigma_mu_member(eta, comp);
    if (!r.lhs.non_member()) r.lhs = l_sigma_mu_member(psi, img);
    r.rhs = l_sigma_mu_member(pe, comp);
    gate(r);
    for (const auto& x : ens.paths) {
        const SamplePath y = star_mu_on_path(eta, x, comp, false);
        const SamplePath lhs = star_mu_on_path(psi, y, img, false);
        const SamplePath rhs = star_mu_on_path(pe, x, comp, false);
        r.max_discrepancy = std::max(r.max_discrepancy, path_discrepancy(lhs, rhs));
        ++r.paths;
    }
    r.ok = r.max_discrepancy <= 1e-10;
    return r;
}

double jump_representation_discrepancy(const CompensatorSpec& comp, const Ensemble& ens) {
    double d = 0.0;
    for (const auto& x : ens.paths) {
        SamplePath z = star_mu_on_path(Integrand::identity(), x, comp, false);
        z.x0 = x.x0;
        d = std::max(d, path_discrepancy(x, z));
    }
    return d;
}

}  // namespace purejump

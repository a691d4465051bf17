#include "purejump/decompose.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "purejump/config.hpp"
#include "purejump/error.hpp"
#include "purejump/extint.hpp"
#include "purejump/simulate.hpp"

namespace purejump {

namespace {

long atom_cap(const FixedTimes& f) { return f.generated ? f.n_max : LONG_MAX; }

struct RankIndex {
    std::vector<std::pair<double, long>> by_time;  // (t, rank)

    explicit RankIndex(const std::vector<PredictableTime>& order, long n) {
        const long m = std::min<long>(n, static_cast<long>(order.size()));
        by_time.reserve(static_cast<std::size_t>(std::max(m, 0L)));
        for (long r = 0; r < m; ++r) by_time.push_back({order[static_cast<std::size_t>(r)].t, r});
        std::sort(by_time.begin(), by_time.end());
    }
    bool kept(double t) const {
        const auto it = std::lower_bound(by_time.begin(), by_time.end(), std::make_pair(t, LONG_MIN));
        return it != by_time.end() && it->first == t;
    }
};

std::vector<std::pair<double, double>> kept_atoms(const FvCurve& c, const RankIndex& idx) {
    std::vector<std::pair<double, double>> out;
    for (const auto& a : c.atoms()) {
        if (idx.kept(a.first)) out.push_back(a);
    }
    return out;
}

}  // namespace

Decomposition split_qc_dp(const CompensatorSpec& comp) {
    Decomposition d;
    d.qc = comp;
    d.dp = comp;
    d.qc.components.clear();
    d.dp.components.clear();
    d.qc.name = comp.name + "/qc";
    d.dp.name = comp.name + "/dp";
    // both parts keep the full spec's level grid kind
    const kernel::LevelGrid g = kernel::level_grid(comp, std::max(comp.scheme.levels, 1));
    const auto kind = g.atom_aligned ? TruncationScheme::Kind::AtomAligned : TruncationScheme::Kind::Dyadic;
    d.qc.scheme.kind = kind;
    d.dp.scheme.kind = kind;
    for (const auto& c : comp.components) {
        if (const auto* f = std::get_if<FixedTimes>(&c.clock.v)) {
            d.dp.components.push_back(c);
            for (const auto& [s, w] : kernel::clock_atoms(*f, 0.0, comp.horizon, atom_cap(*f))) {
                if (w > 0.0) d.times.push_back({s.t, w, c.id, s.atom});
            }
        } else {
            d.qc.components.push_back(c);
        }
    }
    if (d.qc.components.empty()) d.qc.scheme.kind = TruncationScheme::Kind::Auto;
    if (d.dp.components.empty()) d.dp.scheme.kind = TruncationScheme::Kind::Auto;
    std::stable_sort(d.times.begin(), d.times.end(), [](const PredictableTime& a, const PredictableTime& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.t != b.t) return a.t < b.t;
        if (a.component != b.component) return a.component < b.component;
        return a.atom < b.atom;
    });
    return d;
}

std::string Decomposition::to_text() const {
    std::ostringstream os;
    os.precision(12);
    os << "quasi-left-continuous part (" << qc.components.size() << " components):\n"
       << config::to_json(qc) << "\n";
    os << "predictable-jump part (" << dp.components.size() << " components):\n" << config::to_json(dp) << "\n";
    os << "predictable times: " << times.size() << "\n";
    const std::size_t show = std::min<std::size_t>(times.size(), 20);
    for (std::size_t i = 0; i < show; ++i) {
        os << "  " << i + 1 << ": t=" << times[i].t << " weight=" << times[i].weight << " component=" << times[i].component
           << " atom=" << times[i].atom << "\n";
    }
    if (show < times.size()) os << "  ... " << times.size() - show << " more\n";
    return os.str();
}

CompensatorSpec SigmaFvWitness::restricted(const CompensatorSpec& dp, long n) const {
    CompensatorSpec out = dp;
    out.name = dp.name + "/D" + std::to_string(n);
    for (auto& c : out.components) {
        auto* f = std::get_if<FixedTimes>(&c.clock.v);
        if (!f) continue;
        // kept atoms of this component, by index
        std::vector<long> kept;
        for (long r = 0; r < std::min<long>(n - 1, static_cast<long>(times.size())); ++r) {
            const auto& p = times[static_cast<std::size_t>(r)];
            if (p.component == c.id) kept.push_back(p.atom);
        }
        std::sort(kept.begin(), kept.end());
        const long top = kept.empty() ? 0 : kept.back();
        FixedTimes e;
        e.generated = false;
        for (long a = 1; a <= top; ++a) {
            e.times.push_back(kernel::atom_time(*f, a));
            e.weights.push_back(std::binary_search(kept.begin(), kept.end(), a) ? kernel::atom_weight(*f, a) : 0.0);
        }
        c.clock.v = e;
    }
    out.components.erase(std::remove_if(out.components.begin(), out.components.end(),
                                        [](const Component& c) {
                                            const auto* f = std::get_if<FixedTimes>(&c.clock.v);
                                            return f && f->times.empty();
                                        }),
                         out.components.end());
    return out;
}

SigmaFvWitness dp_is_sigma_fv(const Decomposition& d) {
    SigmaFvWitness w;
    w.flag = Membership::Member;
    w.times = d.times;
    if (d.times.empty()) {
        w.detail = "no predictable times; D_n is everything";
    } else {
        std::ostringstream os;
        os.precision(10);
        os << "D_n drops the predictable times ranked n and later; " << d.times.size() << " times, first "
           << d.times.front().t;
        w.detail = os.str();
    }
    return w;
}

SamplePath exhaustion_partial(const SamplePath& x, const std::vector<PredictableTime>& order, long n) {
    const RankIndex idx(order, n);
    SamplePath p;
    p.x0 = x.x0;
    p.horizon = x.horizon;
    p.seed = x.seed;
    p.index = x.index;
    p.knots = x.knots;
    for (const auto& e : x.events) {
        if (idx.kept(e.t)) p.events.push_back(e);
    }
    p.fv = std::make_shared<FvCurve>(FvCurve({}, {}, kept_atoms(*x.fv, idx)));
    p.drift = x.drift == x.fv ? p.fv : std::make_shared<FvCurve>(FvCurve({}, {}, kept_atoms(*x.drift, idx)));
    p.finalize();
    return p;
}

ConvergenceReport predictable_exhaustion_converges(const Decomposition& d, const std::vector<int>& ns, double t,
                                                   std::size_t paths, std::uint64_t seed, std::uint64_t shuffle_seed) {
    if (ns.empty()) fail(ErrorCode::InvalidArgument, "no exhaustion counts given");
    std::vector<PredictableTime> order = d.times;
    if (shuffle_seed != 0) {
        std::mt19937_64 rng(shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    ConvergenceReport rep;
    rep.spec = d.dp.name;
    rep.t = t;
    rep.seed = seed;
    rep.paths = paths;
    rep.full_levels = static_cast<int>(order.size());
    ResidualAccumulator acc(ns, t, paths);
    if (!d.dp.components.empty()) {
        const auto table = build_level_table(d.dp);
        for (std::size_t i = 0; i < paths; ++i) {
            const SamplePath x = sample_path(d.dp, table, seed, i);
            for (std::size_t j = 0; j < ns.size(); ++j) acc.add(j, i, difference(x, exhaustion_partial(x, order, ns[j])));
        }
    } else {
        SamplePath zero;
        zero.horizon = t;
        for (std::size_t i = 0; i < paths; ++i) {
            zero.seed = seed;
            zero.index = i;
            for (std::size_t j = 0; j < ns.size(); ++j) acc.add(j, i, zero);
        }
    }
    rep.rows = acc.rows();
    rep.series.flag = Membership::Member;
    rep.series.qv.flag = Membership::Member;
    rep.series.qv.witness.detail = "predictable-time exhaustion";
    rep.series.drift.flag = Membership::Member;
    rep.series.drift.witness.detail = "predictable-time exhaustion";
    return rep;
}

TruncationDrift drift_of_truncation(const SamplePath& path, const CompensatorSpec& comp, double tol) {
    TruncationDrift out;
    out.drift = *path.drift;
    const double T = path.horizon;
    const auto& knots = *path.knots;
    // D: slices where the truncated mean converges absolutely
    bool all_in_d = true, any_in_d = false;
    for (const auto& c : comp.components) {
        if (const auto* f = std::get_if<FixedTimes>(&c.clock.v)) {
            for (const auto& [s, w] : kernel::clock_atoms(*f, 0.0, T, std::min<long>(atom_cap(*f), 4096))) {
                const bool fin = kernel::moment(c.kernel, s, 1.0, Region::small_jumps()).absolute.is_finite();
                all_in_d = all_in_d && fin;
                any_in_d = any_in_d || fin;
                if (w > 0.0) {
                    // drift jump at the atom over the atom weight
                    double a = path.drift->operator()(s.t) - path.drift->left(s.t);
                    out.density.push_back({s.t, a / w});
                }
            }
            continue;
        }
        for (int i = 0; i < 64; ++i) {
            const double tm = T * (i + 0.5) / 64.0;
            const bool fin =
                kernel::moment(c.kernel, kernel::slice_at(c, tm), 1.0, Region::small_jumps()).absolute.is_finite();
            all_in_d = all_in_d && fin;
            any_in_d = any_in_d || fin;
        }
    }
    for (std::size_t i = 1; i < knots.size() && !comp.components.empty(); ++i) {
        double a = 0.0;
        for (const auto& c : comp.components) {
            if (!kernel::clock_is_atomic(c.clock)) a += kernel::clock_density(c.clock, 0.5 * (knots[i - 1] + knots[i]));
        }
        if (a <= 0.0) break;
        const double slope = (path.drift->left(knots[i]) - (*path.drift)(knots[i - 1])) / (knots[i] - knots[i - 1]);
        out.density.push_back({0.5 * (knots[i - 1] + knots[i]), slope / a});
    }
    std::sort(out.density.begin(), out.density.end());
    if (!any_in_d) {
        out.verified = false;
        out.detail = "truncated mean diverges on every probed slice; nothing to verify";
        return out;
    }
    if (!all_in_d) {
        out.verified = false;
        out.detail = "truncated mean diverges on part of the clock; verification skipped";
        return out;
    }
    CompensatorSpec c = comp;
    c.horizon = T;
    const FvCurve mean = nu_curve(Integrand::identity(), c, knots, EtaPart::Small);
    std::vector<double> ts = knots;
    for (const auto& a : mean.atoms()) ts.push_back(a.first);
    for (const auto& a : path.drift->atoms()) ts.push_back(a.first);
    double worst = 0.0, scale = 1.0;
    for (double s : ts) {
        worst = std::max(worst, std::abs(mean(s) - (*path.drift)(s)));
        scale = std::max(scale, std::abs(mean(s)));
    }
    out.max_residual = worst;
    if (worst > tol * scale) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "stored drift differs from the integrated truncated mean by %.6g", worst);
        fail(ErrorCode::DriftMismatch, buf);
    }
    out.verified = true;
    out.detail = "stored drift equals the clock integral of the truncated mean";
    return out;
}

}  // namespace purejump

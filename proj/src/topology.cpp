#include "purejump/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "purejump/error.hpp"
#include "purejump/extint.hpp"
#include "purejump/kernel.hpp"
#include "purejump/numerics.hpp"
#include "purejump/simulate.hpp"

namespace purejump {

Estimate estimate(const std::vector<double>& v) {
    Estimate e;
    e.n = v.size();
    if (v.empty()) return e;
    numerics::CompensatedSum s;
    for (double x : v) s += x;
    e.mean = s.value() / static_cast<double>(v.size());
    if (v.size() > 1) {
        numerics::CompensatedSum q;
        for (double x : v) q += (x - e.mean) * (x - e.mean);
        e.stderr_ = std::sqrt(q.value() / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return e;
}

namespace {

void check_coupled(const Ensemble& x, const Ensemble& y) {
    if (x.size() != y.size()) fail(ErrorCode::UncoupledEnsembles, "ensembles differ in size");
    if (x.seed != y.seed) fail(ErrorCode::UncoupledEnsembles, "ensembles come from different seeds");
}

TimeFunction drift_sign(const SamplePath& r) {
    const auto& k = r.drift->knots();
    const auto& v = r.drift->values();
    if (k.size() < 2) return TimeFunction::constant(1.0);
    std::vector<double> breaks(k.begin() + 1, k.end() - 1);
    std::vector<double> values;
    for (std::size_t i = 1; i < k.size(); ++i) values.push_back(v[i] >= v[i - 1] ? 1.0 : -1.0);
    return TimeFunction::step(std::move(breaks), std::move(values));
}

// zeta . R_t for a left-continuous step zeta: sum over cells of zeta times the increment.
double zeta_dot(const TimeFunction& z, const SamplePath& r, double t) {
    if (z.is_constant()) return z(0.0) * (r.value(t) - r.x0);
    std::vector<double> pts{0.0};
    for (double b : z.breakpoints(0.0, t)) pts.push_back(b);
    pts.push_back(t);
    numerics::CompensatedSum s;
    double prev = r.value(0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double cur = r.value(pts[i]);
        const double zv = z(pts[i]);
        if (zv != 0.0) s += zv * (cur - prev);
        prev = cur;
    }
    return s.value();
}

std::vector<double> lower_values(const SamplePath& r, double t, const std::vector<FamilyMember>& fam) {
    std::vector<double> out(fam.size());
    std::optional<TimeFunction> ds;
    for (std::size_t m = 0; m < fam.size(); ++m) {
        const auto& f = fam[m];
        double v;
        if (f.kind == FamilyMember::Kind::DriftSign) {
            if (!ds) ds = drift_sign(r);
            v = f.sign * ((*ds)(0.0) * r.x0 + zeta_dot(*ds, r, t));
        } else {
            v = f.zeta(0.0) * r.x0 + zeta_dot(f.zeta, r, t);
        }
        out[m] = std::min(1.0, std::abs(v));
    }
    return out;
}

struct UpperValues {
    double drift, qv;
};

UpperValues upper_values(const SamplePath& r, double t) {
    if (!r.drift) fail(ErrorCode::DecompositionUnavailable, "path has no drift field");
    return {std::min(1.0, r.drift->total_variation(t)), std::min(1.0, std::sqrt(r.qv(t) + r.qv_tail))};
}

LowerBound summarize(const std::vector<FamilyMember>& fam, const std::vector<std::vector<double>>& vals) {
    LowerBound out;
    for (std::size_t m = 0; m < fam.size(); ++m) {
        const Estimate e = estimate(vals[m]);
        out.all.push_back({fam[m].name, e});
        if (m == 0 || e.mean > out.best.mean) {
            out.best = e;
            out.member = fam[m].name;
        }
    }
    return out;
}

UpperBound summarize_upper(const std::vector<double>& d, const std::vector<double>& q) {
    std::vector<double> s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s[i] = d[i] + q[i];
    return {estimate(s), estimate(d), estimate(q)};
}

}  // namespace

Estimate ucp_distance(const Ensemble& x, const Ensemble& y, double t, int grid) {
    check_coupled(x, y);
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const SamplePath r = difference(x.paths[i], y.paths[i]);
        s[i] = std::min(1.0, r.sup_abs(t, grid));
    }
    return estimate(s);
}

std::vector<SamplePath> residuals(const Ensemble& x, const Ensemble& y) {
    check_coupled(x, y);
    std::vector<SamplePath> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(difference(x.paths[i], y.paths[i]));
    return out;
}

std::vector<FamilyMember> default_family(double t) {
    std::vector<FamilyMember> f;
    for (double s : {1.0, -1.0}) {
        f.push_back({s > 0 ? "+1" : "-1", FamilyMember::Kind::Fixed, TimeFunction::constant(s), s});
    }
    for (double s : {1.0, -1.0}) {
        f.push_back({s > 0 ? "+sign(drift)" : "-sign(drift)", FamilyMember::Kind::DriftSign,
                     TimeFunction::constant(1.0), s});
    }
    for (int depth = 1; depth <= 4; ++depth) {
        const int cells = 1 << depth;
        for (int j = 0; j < cells; ++j) {
            const double a = t * j / cells, b = t * (j + 1) / cells;
            for (double s : {1.0, -1.0}) {
                char name[64];
                std::snprintf(name, sizeof name, "%s1(%.4g,%.4g]", s > 0 ? "+" : "-", a, b);
                TimeFunction z = TimeFunction::step({a, b}, {0.0, s, 0.0});
                f.push_back({name, FamilyMember::Kind::Fixed, z, s});
            }
        }
    }
    std::vector<double> breaks, values;
    for (int j = 1; j < 16; ++j) breaks.push_back(t * j / 16);
    for (int j = 0; j < 16; ++j) values.push_back(j % 2 == 0 ? 1.0 : -1.0);
    f.push_back({"alternating", FamilyMember::Kind::Fixed, TimeFunction::step(breaks, values), 1.0});
    return f;
}

LowerBound emery_lower(const Ensemble& x, const Ensemble& y, double t, const std::vector<FamilyMember>& fam_in) {
    const auto rs = residuals(x, y);
    const std::vector<FamilyMember> fam = fam_in.empty() ? default_family(t) : fam_in;
    std::vector<std::vector<double>> vals(fam.size(), std::vector<double>(rs.size()));
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto v = lower_values(rs[i], t, fam);
        for (std::size_t m = 0; m < fam.size(); ++m) vals[m][i] = v[m];
    }
    return summarize(fam, vals);
}

UpperBound emery_upper(const std::vector<SamplePath>& rs, double t) {
    std::vector<double> d(rs.size()), q(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const UpperValues u = upper_values(rs[i], t);
        d[i] = u.drift;
        q[i] = u.qv;
    }
    return summarize_upper(d, q);
}

std::string SeriesVerdict::to_text() const {
    std::ostringstream os;
    os << "series: " << (flag == Membership::Member ? "converges" : flag == Membership::NonMember ? "diverges" : "undecided")
       << "\n  qv summability: " << membership_name(qv.flag) << " (" << qv.witness.detail << ")"
       << "\n  drift convergence: " << membership_name(drift.flag) << " (" << drift.witness.detail << ")";
    return os.str();
}

SeriesVerdict series_converges(const CompensatorSpec& spec, double t) {
    SeriesVerdict v;
    CompensatorSpec comp = spec;
    comp.horizon = t;
    v.qv.witness.condition = "sum_k E[X^(k),X^(k)]_t < inf";
    v.drift.witness.condition = "sum_k B^(k)[1] converges in total variation";
    const int K = comp.scheme.levels;
    try {
        const kernel::LevelGrid grid = kernel::level_grid(comp, std::max(K, 1));
        const Region big = grid.region(0);
        const Region rest = Region::abs_band(0.0, grid.lower(0), false, true);
        ExtendedReal mass0 = ExtendedReal::finite(0.0), qrest = ExtendedReal::finite(0.0);
        for (const auto& c : comp.components) {
            mass0 += kernel::clock_integral(
                c, [&](const Slice& s) { return ExtendedReal::finite(kernel::mass(c.kernel, s, big)); }, 0.0, t);
            qrest += kernel::clock_integral(
                c, [&](const Slice& s) { return kernel::moment(c.kernel, s, 2.0, rest).absolute; }, 0.0, t);
        }
        if (mass0.is_finite() && qrest.is_finite()) {
            v.qv.flag = Membership::Member;
            char buf[128];
            std::snprintf(buf, sizeof buf, "level 0 expects %.6g jumps; QV of levels >= 1 is %.6g", mass0.value(),
                          qrest.value());
            v.qv.witness.detail = buf;
            v.qv.witness.value = qrest;
        } else {
            v.qv.flag = Membership::NonMember;
            v.qv.witness.detail = mass0.is_finite() ? "QV of levels >= 1: " + qrest.describe()
                                                    : "level 0 activity: " + mass0.describe();
            v.qv.witness.value = mass0.is_finite() ? qrest : mass0;
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::QuadratureFailure && e.code() != ErrorCode::UnknownAsymptotics) throw;
        v.qv.flag = Membership::Undecided;
        v.qv.witness.detail = e.what();
    }

    // level drifts d_k; Cauchy test on the tail of the partial sums
    SimOptions o;
    o.horizon = t;
    o.levels = std::max(K, 1);
    const auto table = build_level_table(comp, o);
    const int L = table->levels;
    std::vector<double> tv(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) tv[static_cast<std::size_t>(k)] = table->level_drift[static_cast<std::size_t>(k)].total_variation(t);
    double worst = 0.0;
    int wn = 0, wm = 0;
    const int start = L / 2;
    const bool all_zero = std::all_of(tv.begin(), tv.end(), [](double x) { return x == 0.0; });
    for (int n = all_zero ? L : std::max(start, L - 64); n < L; ++n) {
        std::vector<std::pair<const FvCurve*, double>> terms;
        for (int m = n + 1; m <= L; ++m) {
            const auto& d = table->level_drift[static_cast<std::size_t>(m - 1)];
            if (!d.is_zero()) terms.push_back({&d, 1.0});
            const double w = terms.empty() ? 0.0 : FvCurve::sum_of(terms).total_variation(t);
            if (w > worst) {
                worst = w;
                wn = n;
                wm = m;
            }
        }
    }
    double total = 0.0;
    for (double x : tv) total += x;
    char buf[160];
    if (worst <= 1e-12 * std::max(1.0, total)) {
        v.drift.flag = Membership::Member;
        std::snprintf(buf, sizeof buf, "tail partial sums over levels %d..%d have total variation <= %.3g", start, L,
                      worst);
    } else {
        const double ratio = tv[static_cast<std::size_t>(L - 1)];
        if (ratio > 0.0 && tv[static_cast<std::size_t>(start)] > 0.0 &&
            ratio >= 0.5 * tv[static_cast<std::size_t>(start)]) {
            v.drift.flag = Membership::NonMember;
            std::snprintf(buf, sizeof buf, "sum over levels %d..%d has total variation %.6g; level TV does not decay",
                          wn, wm, worst);
        } else {
            // decaying level drifts: certify by the summed tail variation
            double tail = 0.0;
            for (int k = start; k < L; ++k) tail += tv[static_cast<std::size_t>(k)];
            v.drift.flag = Membership::Undecided;
            std::snprintf(buf, sizeof buf, "tail variation %.6g over levels %d..%d", tail, start, L);
        }
    }
    v.drift.witness.detail = buf;
    v.drift.witness.value = ExtendedReal::finite(worst);

    if (v.qv.member() && v.drift.member()) {
        v.flag = Membership::Member;
    } else if (v.qv.non_member() || v.drift.non_member()) {
        v.flag = Membership::NonMember;
    } else {
        v.flag = Membership::Undecided;
    }
    return v;
}

bool ConvergenceReport::sandwich_holds() const {
    return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) {
        const double se = std::hypot(r.lower.best.stderr_, r.upper.total.stderr_);
        return r.lower.best.mean <= r.upper.total.mean + 2.0 * se;
    });
}

std::string ConvergenceReport::to_text() const {
    std::ostringstream os;
    os << "spec " << spec << ", t = " << t << ", paths " << paths << ", seed " << seed << ", full levels " << full_levels
       << "\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%8s %12s %10s %12s %10s %12s %10s  %s\n", "levels", "ucp", "se", "lower", "se",
                  "upper", "se", "lower member");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%8d %12.6g %10.3g %12.6g %10.3g %12.6g %10.3g  %s\n", r.levels, r.ucp.mean,
                      r.ucp.stderr_, r.lower.best.mean, r.lower.best.stderr_, r.upper.total.mean,
                      r.upper.total.stderr_, r.lower.member.c_str());
        os << buf;
    }
    os << series.to_text() << "\n";
    os << "sandwich " << (sandwich_holds() ? "holds" : "FAILS") << "\n";
    return os.str();
}

std::string ConvergenceReport::to_json() const {
    nlohmann::json j;
    j["spec"] = spec;
    j["t"] = t;
    j["seed"] = seed;
    j["paths"] = paths;
    j["full_levels"] = full_levels;
    auto est = [](const Estimate& e) { return nlohmann::json{{"mean", e.mean}, {"stderr", e.stderr_}}; };
    for (const auto& r : rows) {
        j["rows"].push_back({{"levels", r.levels},
                             {"ucp", est(r.ucp)},
                             {"emery_lower", est(r.lower.best)},
                             {"emery_lower_member", r.lower.member},
                             {"emery_upper", est(r.upper.total)},
                             {"emery_upper_drift", est(r.upper.drift_term)},
                             {"emery_upper_qv", est(r.upper.qv_term)}});
    }
    j["series"] = {{"verdict", membership_name(series.flag)},
                   {"qv", membership_name(series.qv.flag)},
                   {"qv_detail", series.qv.witness.detail},
                   {"drift", membership_name(series.drift.flag)},
                   {"drift_detail", series.drift.witness.detail}};
    j["sandwich"] = sandwich_holds();
    return j.dump(2);
}

ResidualAccumulator::ResidualAccumulator(std::vector<int> labels, double t, std::size_t paths)
    : labels_(std::move(labels)), t_(t), family_(default_family(t)) {
    const std::size_t L = labels_.size();
    ucp_.assign(L, std::vector<double>(paths));
    drift_.assign(L, std::vector<double>(paths));
    qv_.assign(L, std::vector<double>(paths));
    lower_.assign(L, std::vector<std::vector<double>>(family_.size(), std::vector<double>(paths)));
}

void ResidualAccumulator::add(std::size_t row, std::size_t path, const SamplePath& r) {
    ucp_.at(row).at(path) = std::min(1.0, r.sup_abs(t_));
    const auto lv = lower_values(r, t_, family_);
    for (std::size_t m = 0; m < family_.size(); ++m) lower_[row][m][path] = lv[m];
    const UpperValues u = upper_values(r, t_);
    drift_[row][path] = u.drift;
    qv_[row][path] = u.qv;
}

std::vector<ConvergenceRow> ResidualAccumulator::rows() const {
    std::vector<ConvergenceRow> out;
    for (std::size_t j = 0; j < labels_.size(); ++j) {
        ConvergenceRow row;
        row.levels = labels_[j];
        row.ucp = estimate(ucp_[j]);
        row.lower = summarize(family_, lower_[j]);
        row.upper = summarize_upper(drift_[j], qv_[j]);
        out.push_back(std::move(row));
    }
    return out;
}

ConvergenceReport convergence_report(const CompensatorSpec& comp, const std::vector<int>& levels, double t,
                                     std::size_t paths, std::uint64_t seed) {
    if (levels.empty()) fail(ErrorCode::InvalidArgument, "no level counts given");
    ConvergenceReport rep;
    rep.spec = comp.name;
    rep.t = t;
    rep.seed = seed;
    rep.paths = paths;
    const int full = std::max(comp.scheme.levels, *std::max_element(levels.begin(), levels.end()));
    rep.full_levels = full;
    SimOptions o;
    o.levels = full;
    const auto table = build_level_table(comp, o);
    ResidualAccumulator acc(levels, t, paths);
    // one path at a time: ensembles of long paths do not fit in memory
    for (std::size_t i = 0; i < paths; ++i) {
        const SamplePath x = sample_path(comp, table, seed, i, o);
        for (std::size_t j = 0; j < levels.size(); ++j) acc.add(j, i, difference(x, partial_sum_path(x, levels[j])));
    }
    rep.rows = acc.rows();
    rep.series = series_converges(comp, t);
    return rep;
}

}  // namespace purejump

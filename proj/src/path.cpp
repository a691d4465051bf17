#include "purejump/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "purejump/error.hpp"
#include "purejump/numerics.hpp"

namespace purejump {

namespace {

void merge_atoms(std::vector<std::pair<double, double>>& atoms) {
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<double, double>> out;
    for (const auto& a : atoms) {
        if (!out.empty() && out.back().first == a.first) {
            out.back().second += a.second;
        } else {
            out.push_back(a);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& a) { return a.second == 0.0; }),
              out.end());
    atoms = std::move(out);
}

}  // namespace

FvCurve::FvCurve(std::vector<double> knots, std::vector<double> values,
                 std::vector<std::pair<double, double>> atoms)
    : knots_(std::move(knots)), values_(std::move(values)), atoms_(std::move(atoms)) {
    if (knots_.size() != values_.size()) fail(ErrorCode::InvalidArgument, "knots and values differ in size");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] > knots_[i - 1])) fail(ErrorCode::InvalidArgument, "knots must increase");
    }
    bool all_zero = true;
    for (double v : values_) all_zero = all_zero && v == 0.0;
    if (all_zero) {
        knots_.clear();
        values_.clear();
    }
    merge_atoms(atoms_);
    double c = 0.0;
    atom_cum_.reserve(atoms_.size());
    for (const auto& a : atoms_) atom_cum_.push_back(c += a.second);
}

double FvCurve::continuous(double t) const {
    if (knots_.empty()) return 0.0;
    if (t <= knots_.front()) return values_.front();
    if (t >= knots_.back()) return values_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    const double a = knots_[i - 1], b = knots_[i];
    if (t == a) return values_[i - 1];
    const double w = (t - a) / (b - a);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

double FvCurve::operator()(double t) const {
    double v = continuous(t);
    const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                                     [](double x, const auto& a) { return x < a.first; });
    if (it != atoms_.begin()) v += atom_cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
    return v;
}

double FvCurve::left(double t) const {
    double v = continuous(t);
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                                     [](const auto& a, double x) { return a.first < x; });
    if (it != atoms_.begin()) v += atom_cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
    return v;
}

double FvCurve::total_variation(double t) const {
    numerics::CompensatedSum s;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (knots_[i - 1] >= t) break;
        const double hi = std::min(knots_[i], t);
        s += std::abs(continuous(hi) - values_[i - 1]);
    }
    for (const auto& a : atoms_) {
        if (a.first > t) break;
        s += std::abs(a.second);
    }
    return s.value();
}

double FvCurve::integrate(const TimeFunction& z, double t) const {
    numerics::CompensatedSum s;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double a = knots_[i - 1];
        if (a >= t) break;
        const double b = std::min(knots_[i], t);
        std::vector<double> cuts{a};
        for (double c : z.breakpoints(a, b)) cuts.push_back(c);
        cuts.push_back(b);
        for (std::size_t j = 1; j < cuts.size(); ++j) {
            const double zv = z(cuts[j]);
            if (zv != 0.0) s += zv * (continuous(cuts[j]) - continuous(cuts[j - 1]));
        }
    }
    for (const auto& a : atoms_) {
        if (a.first > t) break;
        s += z(a.first) * a.second;
    }
    return s.value();
}

FvCurve FvCurve::sum_of(const std::vector<std::pair<const FvCurve*, double>>& terms) {
    std::vector<double> knots;
    std::vector<std::pair<double, double>> atoms;
    for (const auto& [c, w] : terms) {
        if (w == 0.0) continue;
        knots.insert(knots.end(), c->knots_.begin(), c->knots_.end());
        for (const auto& a : c->atoms_) atoms.push_back({a.first, w * a.second});
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> values(knots.size(), 0.0);
    for (const auto& [c, w] : terms) {
        if (w == 0.0 || c->knots_.empty()) continue;
        for (std::size_t i = 0; i < knots.size(); ++i) values[i] += w * c->continuous(knots[i]);
    }
    return FvCurve(std::move(knots), std::move(values), std::move(atoms));
}

FvCurve FvCurve::plus(const FvCurve& other, double scale) const {
    return sum_of({{this, 1.0}, {&other, scale}});
}

FvCurve FvCurve::scaled(double c) const { return sum_of({{this, c}}); }

FvCurve LevelTable::fv_upto(int n) const {
    std::vector<std::pair<const FvCurve*, double>> terms{{&base, 1.0}};
    const int m = std::min(n, levels);
    for (int k = 0; k < m; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        if (!level_drift[ku].is_zero()) terms.push_back({&level_drift[ku], 1.0});
        if (!compensator[ku].is_zero()) terms.push_back({&compensator[ku], -1.0});
    }
    return FvCurve::sum_of(terms);
}

FvCurve LevelTable::drift_upto(int n) const {
    std::vector<std::pair<const FvCurve*, double>> terms{{&base, 1.0}};
    const int m = std::min(n, levels);
    for (int k = 0; k < m; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        if (!level_drift[ku].is_zero()) terms.push_back({&level_drift[ku], 1.0});
    }
    return FvCurve::sum_of(terms);
}

void SamplePath::finalize() {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (!(events[i].t > events[i - 1].t)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "two jumps at time %.17g", events[i].t);
            fail(ErrorCode::InvalidSpec, buf);
        }
    }
    cum_jumps.resize(events.size());
    cum_sq.resize(events.size());
    numerics::CompensatedSum s, q;
    for (std::size_t i = 0; i < events.size(); ++i) {
        s += events[i].dx;
        q += events[i].dx * events[i].dx;
        cum_jumps[i] = s.value();
        cum_sq[i] = q.value();
    }
}

namespace {

// Index one past the last event with time <= t (strict: < t).
std::size_t count_upto(const std::vector<Event>& ev, double t, bool strict) {
    const auto it = strict ? std::lower_bound(ev.begin(), ev.end(), t,
                                              [](const Event& e, double x) { return e.t < x; })
                           : std::upper_bound(ev.begin(), ev.end(), t,
                                              [](double x, const Event& e) { return x < e.t; });
    return static_cast<std::size_t>(it - ev.begin());
}

}  // namespace

double SamplePath::value(double t) const {
    const std::size_t n = count_upto(events, t, false);
    return x0 + (n ? cum_jumps[n - 1] : 0.0) + (*fv)(t);
}

double SamplePath::left(double t) const {
    const std::size_t n = count_upto(events, t, true);
    return x0 + (n ? cum_jumps[n - 1] : 0.0) + fv->left(t);
}

double SamplePath::qv(double t) const {
    const std::size_t n = count_upto(events, t, false);
    return n ? cum_sq[n - 1] : 0.0;
}

std::size_t SamplePath::jump_count(double t) const { return count_upto(events, t, false); }

std::vector<double> SamplePath::sup_times(double t, int grid) const {
    std::vector<double> ts;
    for (const auto& e : events) {
        if (e.t > t) break;
        ts.push_back(e.t);
    }
    for (double k : fv->knots()) {
        if (k <= t) ts.push_back(k);
    }
    for (const auto& a : fv->atoms()) {
        if (a.first <= t) ts.push_back(a.first);
    }
    for (int i = 0; i <= grid; ++i) ts.push_back(t * i / grid);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

double SamplePath::sup_abs(double t, int grid) const {
    double m = 0.0;
    for (double s : sup_times(t, grid)) {
        m = std::max(m, std::abs(value(s)));
        if (s > 0.0) m = std::max(m, std::abs(left(s)));
    }
    return m;
}

SamplePath difference(const SamplePath& a, const SamplePath& b) {
    if (a.seed != b.seed || a.index != b.index) {
        fail(ErrorCode::UncoupledEnsembles, "paths come from different seeds or indices");
    }
    SamplePath r;
    r.x0 = a.x0 - b.x0;
    r.horizon = std::min(a.horizon, b.horizon);
    r.seed = a.seed;
    r.index = a.index;
    // same table and level count: the omitted jumps coincide
    const bool same_tail = a.table && a.table == b.table && a.levels == b.levels;
    r.qv_tail = same_tail ? 0.0 : a.qv_tail + b.qv_tail;
    r.omitted = a.omitted;
    r.knots = a.knots;
    std::size_t i = 0, j = 0;
    while (i < a.events.size() || j < b.events.size()) {
        if (j == b.events.size() || (i < a.events.size() && a.events[i].t < b.events[j].t)) {
            r.events.push_back(a.events[i++]);
        } else if (i == a.events.size() || b.events[j].t < a.events[i].t) {
            Event e = b.events[j++];
            e.dx = -e.dx;
            r.events.push_back(e);
        } else {
            Event e = a.events[i];
            e.dx = a.events[i].dx - b.events[j].dx;
            ++i;
            ++j;
            if (e.dx != 0.0) r.events.push_back(e);
        }
    }
    r.fv = std::make_shared<FvCurve>(a.fv->plus(*b.fv, -1.0));
    r.drift = std::make_shared<FvCurve>(a.drift->plus(*b.drift, -1.0));
    r.finalize();
    return r;
}

std::string digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace purejump

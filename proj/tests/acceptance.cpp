// One line per acceptance criterion; exit status 1 when any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "purejump/classify.hpp"
#include "purejump/decompose.hpp"
#include "purejump/error.hpp"
#include "purejump/extint.hpp"
#include "purejump/paperlab.hpp"
#include "purejump/presets.hpp"
#include "purejump/simulate.hpp"
#include "purejump/topology.hpp"

using namespace purejump;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome scenario(const std::string& id) {
    const auto r = paperlab::reproduce(id, 42);
    std::size_t failed = 0;
    std::string first;
    for (const auto& c : r.checks) {
        if (c.pass) continue;
        if (!failed) first = c.name;
        ++failed;
    }
    Outcome o;
    o.pass = r.pass();
    o.detail = id + ": " + std::to_string(r.checks.size() - failed) + "/" + std::to_string(r.checks.size()) +
               " checks";
    if (failed) o.detail += ", first failure: " + first;
    return o;
}

Outcome identity_suite() {
    double worst = 0.0;
    std::string where;
    std::vector<std::string> skipped;
    auto track = [&](double d, const std::string& what) {
        if (d > worst || std::isnan(d)) {
            worst = std::isnan(d) ? kInf : d;
            where = what;
        }
    };
    const auto zeta = TimeFunction::step({0.3, 0.6}, {1.0, -0.5, 0.25});
    const auto psi = parse_integrand("sign(x)|x|^1.5");
    const auto f = parse_smooth_function("sin");
    for (const auto& name : presets::names()) {
        auto c = presets::by_name(name);
        if (l_sigma_mu_member(Integrand::identity(), c).non_member()) {
            skipped.push_back(name);
            continue;
        }
        if (name == "ex-3.13") c.horizon = std::atan(100.0);
        if (name == "ex-3.8") c.horizon = 2.0;
        const auto ens = simulate_ensemble(c, 20, 7);
        track(jump_representation_discrepancy(c, ens), name + " jump representation");
        track(check_associativity(Integrand::identity(), zeta, c, ens).max_discrepancy, name + " zeta law");
        track(check_associativity(Integrand::identity(), psi, c, ens).max_discrepancy, name + " psi law");
        for (std::size_t i = 0; i < 5; ++i) track(transform_path(f, ens.paths[i], &c).max_discrepancy, name + " f(Y)");
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "max discrepancy %.3g (%s)", worst, where.c_str());
    Outcome o{worst <= 1e-10, buf};
    if (!skipped.empty()) {
        o.detail += "; x not in L_sigma(mu):";
        for (const auto& s : skipped) o.detail += " " + s;
    }
    return o;
}

Outcome decomposition_suite() {
    const auto m = presets::qc_dp_mixture();
    const auto d = split_qc_dp(m);
    std::size_t mismatched = 0, shared = 0;
    const std::size_t N = 10000;
    for (std::uint64_t i = 0; i < N; ++i) {
        const auto a = sample_path(m, 9, i);
        const auto q = sample_path(d.qc, 9, i);
        const auto p = sample_path(d.dp, 9, i);
        std::vector<Event> u = q.events;
        u.insert(u.end(), p.events.begin(), p.events.end());
        std::sort(u.begin(), u.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
        bool same = u.size() == a.events.size();
        for (std::size_t k = 0; same && k < u.size(); ++k) same = u[k].t == a.events[k].t && u[k].dx == a.events[k].dx;
        if (!same) ++mismatched;
        std::set<double> qt;
        for (const auto& e : q.events) qt.insert(e.t);
        for (const auto& e : p.events) shared += qt.count(e.t);
    }
    const auto rep = predictable_exhaustion_converges(split_qc_dp(presets::intro()), {10, 100, 1000, 10000}, 2.0, 8, 3);
    bool decay = true;
    double worst = 0.0, prev = kInf;
    for (const auto& row : rep.rows) {
        double head = 0.0;
        for (long k = row.levels; k >= 1; --k) head += 1.0 / (double(k) * double(k));
        const double oracle = std::sqrt(std::numbers::pi * std::numbers::pi / 6.0 - head);
        const double err = std::abs(row.upper.total.mean - oracle);
        worst = std::max(worst, err);
        decay = decay && err <= std::max(3.0 * row.upper.total.stderr_, 1e-6) && row.upper.total.mean < prev;
        prev = row.upper.total.mean;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu/%zu paths recombine, %zu shared times, exhaustion max |err| %.2g", N - mismatched,
                  N, shared, worst);
    return {mismatched == 0 && shared == 0 && decay, buf};
}

Outcome topology_suite() {
    bool sandwich = true;
    std::size_t rows = 0;
    struct Pair {
        CompensatorSpec spec;
        std::vector<int> levels;
        double t;
        std::size_t paths;
    };
    std::vector<Pair> pairs;
    pairs.push_back({presets::intro(), {10, 100, 1000}, 2.0, 8});
    auto stable = presets::alpha_stable(1.5, 0.0);
    stable.scheme.levels = 12;  // reference path within the shell budget
    pairs.push_back({stable, {2, 4, 8}, 1.0, 200});
    pairs.push_back({presets::one_sided(0.5), {2, 4, 8}, 1.0, 200});
    pairs.push_back({presets::alternating_drift(), {2, 4, 8}, 1.0, 200});
    pairs.push_back({presets::qc_dp_mixture(), {2, 4, 8}, 1.0, 200});
    for (const auto& p : pairs) {
        const auto rep = convergence_report(p.spec, p.levels, p.t, p.paths, 11);
        sandwich = sandwich && rep.sandwich_holds();
        rows += rep.rows.size();
    }
    const bool intro = series_converges(presets::intro(), 2.0).flag == Membership::Member;
    bool symmetric = true;
    for (double a : {0.5, 1.0, 1.5}) symmetric = symmetric && series_converges(presets::alpha_stable(a, 0.0), 1.0).flag == Membership::Member;
    const bool alternating = series_converges(presets::alternating_drift(), 1.0).flag == Membership::NonMember;
    std::string detail = "sandwich on " + std::to_string(rows) + " rows " + (sandwich ? "holds" : "fails") +
                         "; series: intro " + (intro ? "true" : "false?") + ", stable " + (symmetric ? "true" : "false?") +
                         ", alternating " + (alternating ? "false" : "true?");
    return {sandwich && intro && symmetric && alternating, detail};
}

Outcome guarded(const std::function<Outcome()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("threw ") + e.what()};
    }
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"intro process", [] { return scenario("intro"); }},
        {"time-dependent density", [] { return scenario("ex-3.8"); }},
        {"stable table", [] { return scenario("alpha-stable"); }},
        {"geometric atoms", [] { return scenario("ex-5.16"); }},
        {"steered drift", [] { return scenario("lemma-5.10"); }},
        {"Brownian thresholds", [] { return scenario("prop-6.1"); }},
        {"star-integral identities", identity_suite},
        {"decomposition", decomposition_suite},
        {"topology sanity", topology_suite},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = guarded(criteria[i].second);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s  [%s] (%.1f s)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), s);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}

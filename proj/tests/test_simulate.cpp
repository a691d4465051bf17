#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "purejump/error.hpp"
#include "purejump/presets.hpp"
#include "purejump/simulate.hpp"

using namespace purejump;

namespace {

bool same_events(const SamplePath& a, const SamplePath& b) {
    if (a.events.size() != b.events.size()) return false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        if (a.events[i].t != b.events[i].t || a.events[i].dx != b.events[i].dx) return false;
    }
    return true;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("ensembles do not depend on the thread count") {
    for (const char* name : {"ex-3.8", "qc-dp-mixture", "intro"}) {
        CAPTURE(name);
        auto s = presets::by_name(name);
        if (s.name == "intro") s = presets::intro(2000);
        SimOptions o1, o3;
        o1.threads = 1;
        o3.threads = 3;
        const Ensemble a = simulate_ensemble(s, 6, 11, o1);
        const Ensemble b = simulate_ensemble(s, 6, 11, o3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_events(a.paths[i], b.paths[i]));
        CHECK(a.spec_digest == b.spec_digest);
    }
}

TEST_CASE("paths are reproducible from seed and index") {
    const auto s = presets::ex38(1.0);
    CHECK(same_events(sample_path(s, 5, 3), sample_path(s, 5, 3)));
    CHECK_FALSE(same_events(sample_path(s, 5, 3), sample_path(s, 5, 4)));
}

TEST_CASE("intro path: one jump of size 1/n at time 2 - 1/n") {
    const SamplePath p = intro_process(3, 1000);
    REQUIRE(p.events.size() == 1000);
    for (long n = 1; n <= 1000; ++n) {
        const auto& e = p.events[static_cast<std::size_t>(n - 1)];
        CHECK(e.t == doctest::Approx(2.0 - 1.0 / n));
        CHECK(std::abs(e.dx) == doctest::Approx(1.0 / n));
    }
    CHECK(p.jump_count(2.0 - 1.0 / 10) == 10);
    CHECK(p.jump_count(2.0 - 1.0 / 10 - 1e-9) == 9);
    double qv = 0.0;
    for (long n = 1000; n >= 1; --n) qv += 1.0 / (double(n) * double(n));
    CHECK(p.qv(2.0) == doctest::Approx(qv).epsilon(1e-12));
    CHECK(p.fv->total_variation(2.0) == 0.0);
}

TEST_CASE("partial sums keep the first levels") {
    const SamplePath p = intro_process(3, 1000);
    const SamplePath s = partial_sum_path(p, 25);
    REQUIRE(s.events.size() == 25);
    for (const auto& e : s.events) CHECK(std::abs(e.dx) >= 1.0 / 25 - 1e-15);
    CHECK(s.value(2.0) == doctest::Approx(std::accumulate(p.events.begin(), p.events.begin() + 25, 0.0,
                                                          [](double a, const Event& e) { return a + e.dx; })));
}

TEST_CASE("matching drift on a single atom gives the counting process") {
    const auto s = presets::poisson_atom(1.0, 1.0, 1.0);
    const auto ens = simulate_ensemble(s, 4000, 21);
    double m = 0.0, q = 0.0;
    for (const auto& p : ens.paths) {
        const double x = p.value(1.0);
        m += x;
        q += x * x;
    }
    m /= 4000.0;
    q = q / 4000.0 - m * m;
    CHECK(std::abs(m - 1.0) < 4.0 / std::sqrt(4000.0));
    CHECK(q == doctest::Approx(1.0).epsilon(0.1));

    auto c = s;
    c.drift.mode = DriftSpec::Mode::Explicit;
    c.drift.beta = {0.0, 0.0};
    const auto comp = simulate_ensemble(c, 4000, 21);
    double mc = 0.0, events = 0.0;
    for (const auto& p : comp.paths) {
        mc += p.value(1.0);
        events += static_cast<double>(p.jump_count(1.0));
    }
    CHECK(std::abs(mc / 4000.0) < 4.0 / std::sqrt(4000.0));
    CHECK(events == doctest::Approx(m * 4000.0));
}

TEST_CASE("intro terminal values have variance near zeta(2)") {
    const auto v = intro_terminal_values(2000, 9, 10000, 1);
    double m = 0.0, q = 0.0;
    for (double x : v) {
        m += x;
        q += x * x;
    }
    m /= 2000.0;
    q = q / 2000.0 - m * m;
    CHECK(q == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(0.1));
}

TEST_CASE("time-changed step process jumps by phi^2") {
    const SamplePath p = poisson_phi_process(2, std::atan(50.0), 4);
    for (const auto& e : p.events) {
        const double k = std::round(1.0 / std::sqrt(e.dx));
        CHECK(e.dx == doctest::Approx(1.0 / (k * k)));
        CHECK(std::tan(e.t) <= doctest::Approx(k));
        CHECK(std::tan(e.t) >= doctest::Approx(k - 1.0));
    }
}

TEST_CASE("shell budget and infinite clocks are reported") {
    auto s = presets::inverse_square();
    SimOptions o;
    o.levels = 40;
    o.shell_budget = 1e3;
    CHECK(code_of([&] { sample_path(s, 1, 0, o); }) == ErrorCode::ShellOverflow);
    auto t = presets::ex313(2);
    t.horizon = 2.0;
    CHECK(code_of([&] { sample_path(t, 1, 0); }) != static_cast<ErrorCode>(0));
}

TEST_CASE("csv export") {
    const SamplePath p = intro_process(3, 50);
    const std::string csv = path_csv(p, 8);
    CHECK(csv.rfind("t,value,jump\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 50);
}

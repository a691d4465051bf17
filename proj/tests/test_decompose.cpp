#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "purejump/decompose.hpp"
#include "purejump/presets.hpp"
#include "purejump/simulate.hpp"

using namespace purejump;

TEST_CASE("mixture splits into one continuous and one fixed-time part") {
    const auto d = split_qc_dp(presets::qc_dp_mixture());
    CHECK(d.qc.components.size() == 1);
    CHECK(d.dp.components.size() == 1);
    REQUIRE(d.times.size() == 3);
    // equal weights: ordered by time
    CHECK(d.times[0].t == 0.25);
    CHECK(d.times[1].t == 0.5);
    CHECK(d.times[2].t == 0.75);
}

TEST_CASE("coupled seeds recombine the event list exactly") {
    const auto m = presets::qc_dp_mixture();
    const auto d = split_qc_dp(m);
    for (std::uint64_t i = 0; i < 200; ++i) {
        CAPTURE(i);
        const auto a = sample_path(m, 9, i);
        const auto q = sample_path(d.qc, 9, i);
        const auto p = sample_path(d.dp, 9, i);
        std::vector<Event> u = q.events;
        u.insert(u.end(), p.events.begin(), p.events.end());
        std::sort(u.begin(), u.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
        REQUIRE(u.size() == a.events.size());
        for (std::size_t k = 0; k < u.size(); ++k) {
            CHECK(u[k].t == a.events[k].t);
            CHECK(u[k].dx == a.events[k].dx);
        }
        std::set<double> qt;
        for (const auto& e : q.events) qt.insert(e.t);
        for (const auto& e : p.events) CHECK(qt.count(e.t) == 0);
    }
}

TEST_CASE("ranking: heavier times first, then earlier ones") {
    CompensatorSpec s = presets::qc_dp_mixture();
    auto& f = std::get<FixedTimes>(s.components[1].clock.v);
    f.weights = {0.5, 1.0, 0.5};
    const auto d = split_qc_dp(s);
    REQUIRE(d.times.size() == 3);
    CHECK(d.times[0].t == 0.5);
    CHECK(d.times[1].t == 0.25);
    CHECK(d.times[2].t == 0.75);
}

TEST_CASE("fixed-time part of the intro process is sigma-finite-variation") {
    const auto d = split_qc_dp(presets::intro());
    CHECK(d.qc.components.empty());
    const auto w = dp_is_sigma_fv(d);
    CHECK(w.flag == Membership::Member);
    CHECK(d.times.at(0).t == 1.0);
    CHECK(d.times.at(1).t == 1.5);
    for (long n : {2L, 5L, 50L}) {
        CAPTURE(n);
        CHECK(classify(w.restricted(d.dp, n)).j(5).member());
    }
}

TEST_CASE("exhaustion residuals follow the square-root tail") {
    const auto d = split_qc_dp(presets::intro(5000));
    const auto rep = predictable_exhaustion_converges(d, {10, 100, 1000}, 2.0, 6, 3);
    REQUIRE(rep.rows.size() == 3);
    double prev = kInf;
    for (const auto& row : rep.rows) {
        double head = 0.0;
        for (long k = row.levels; k >= 1; --k) head += 1.0 / (double(k) * double(k));
        CAPTURE(row.levels);
        CHECK(std::abs(row.upper.total.mean - std::sqrt(std::numbers::pi * std::numbers::pi / 6.0 - head)) < 1e-6);
        CHECK(row.upper.total.mean < prev);
        prev = row.upper.total.mean;
    }
}

TEST_CASE("drift of the truncated process on a one-sided kernel") {
    const auto s = presets::one_sided(0.5);
    const auto p = sample_path(s, 1, 0);
    const auto td = drift_of_truncation(p, s);
    CHECK(td.verified);
    CHECK(td.max_residual <= 1e-9);
    REQUIRE_FALSE(td.density.empty());
    // int_0^1 x x^{-1.5} dx
    CHECK(td.density[td.density.size() / 2].second == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("decomposition report text") {
    const auto d = split_qc_dp(presets::qc_dp_mixture());
    CHECK_FALSE(d.to_text().empty());
}

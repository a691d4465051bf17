#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "purejump/presets.hpp"
#include "purejump/simulate.hpp"
#include "purejump/topology.hpp"

using namespace purejump;

namespace {

double tail(long n) {
    double head = 0.0;
    for (long k = n; k >= 1; --k) head += 1.0 / (double(k) * double(k));
    return std::numbers::pi * std::numbers::pi / 6.0 - head;
}

}  // namespace

TEST_CASE("estimate of a fixed sample") {
    const Estimate e = estimate({1.0, 2.0, 3.0, 4.0});
    CHECK(e.mean == doctest::Approx(2.5));
    CHECK(e.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(e.n == 4);
}

TEST_CASE("distances between an ensemble and itself vanish") {
    const auto s = presets::one_sided(0.5);
    const auto ens = simulate_ensemble(s, 20, 3);
    CHECK(ucp_distance(ens, ens, 1.0).mean == 0.0);
    CHECK(emery_lower(ens, ens, 1.0).best.mean == 0.0);
    CHECK(emery_upper(residuals(ens, ens), 1.0).total.mean == 0.0);
}

TEST_CASE("intro: upper functional of the truncation error is the square root of the tail") {
    // jumps past n_max enter through the expected tail
    const auto rep = convergence_report(presets::intro(2000), {10, 100, 1000}, 2.0, 4, 5);
    REQUIRE(rep.rows.size() == 3);
    double prev = kInf;
    for (const auto& row : rep.rows) {
        CAPTURE(row.levels);
        CHECK(std::abs(row.upper.total.mean - std::sqrt(tail(row.levels))) < 1e-6);
        CHECK(row.upper.drift_term.mean == 0.0);
        CHECK(row.upper.total.mean < prev);
        prev = row.upper.total.mean;
    }
    CHECK(rep.sandwich_holds());
}

TEST_CASE("lower bound never exceeds the upper bound on test pairs") {
    for (const std::string name : {"one-sided", "ex-3.8", "alternating-drift", "qc-dp-mixture"}) {
        CAPTURE(name);
        auto s = presets::by_name(name);
        s.horizon = 1.0;
        const auto rep = convergence_report(s, {2, 4, 8}, 1.0, 100, 7);
        for (const auto& row : rep.rows) {
            CAPTURE(row.levels);
            CHECK(row.lower.best.mean <= row.upper.total.mean + 2.0 * row.upper.total.stderr_);
        }
    }
}

TEST_CASE("series verdicts") {
    CHECK(series_converges(presets::intro(), 2.0).flag == Membership::Member);
    CHECK(series_converges(presets::alpha_stable(1.5, 0.0), 1.0).flag == Membership::Member);
    CHECK(series_converges(presets::inverse_square(), 1.0).flag == Membership::Member);
    const auto alt = series_converges(presets::alternating_drift(), 1.0);
    CHECK(alt.flag == Membership::NonMember);
    CHECK(alt.drift.non_member());
    CHECK(alt.qv.member());
}

TEST_CASE("default family") {
    const auto fam = default_family(1.0);
    CHECK(fam.size() > 30);
    bool drift_sign = false;
    for (const auto& m : fam) drift_sign = drift_sign || m.kind == FamilyMember::Kind::DriftSign;
    CHECK(drift_sign);
}

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "purejump/error.hpp"
#include "purejump/paperlab.hpp"
#include "purejump/presets.hpp"

using namespace purejump;
using namespace purejump::paperlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("drift pinning minima") {
    const auto r1 = drift_pinning_bruteforce(1);
    CHECK(r1.min_numerator == "3");
    CHECK(r1.min_denominator == "3");
    const auto r3 = drift_pinning_bruteforce(3);
    CHECK(r3.min_numerator == "15");
    CHECK(r3.min_denominator == "27");
    for (int K = 1; K <= 8; ++K) {
        CAPTURE(K);
        const auto r = drift_pinning_bruteforce(K);
        CHECK(r.at_least_half);
        CHECK(r.min_ratio >= 0.5);
    }
    CHECK(code_of([] { drift_pinning_bruteforce(13); }) == ErrorCode::BudgetExceeded);
    CHECK(code_of([] { drift_pinning_bruteforce(0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("steered drift on the inverse-square kernel") {
    const auto comp = presets::inverse_square();
    for (double beta : {-1.0, 0.0, 1.0}) {
        CAPTURE(beta);
        const auto p = steer_drift(comp, beta, 32);
        CHECK(p.within_band());
        CHECK(p.max_residual() <= 1e-9);
        CHECK(p.monotone());
        REQUIRE_FALSE(p.cells.empty());
        for (const auto& s : p.cells[0].steps) {
            if (s.k < 3) continue;
            CAPTURE(s.k);
            // closed form f_k = e^{-beta} / k
            CHECK(s.f * s.k * std::exp(beta) == doctest::Approx(1.0).epsilon(1e-12));
            if (beta == 0.0) CHECK(s.f == doctest::Approx(s.g).epsilon(1e-12));
        }
    }
}

TEST_CASE("steering needs vanishing atoms") {
    CHECK(code_of([] { steer_drift(presets::ex516(), 1.0, 4); }) == ErrorCode::HypothesisViolation);
}

TEST_CASE("threshold update in closed form") {
    const auto F = presets::inverse_square().components[0].kernel;
    const auto u = prop61_step(F, std::log(0.125), std::log(0.125), 1.0);
    CHECK(std::exp(u.log_f) == doctest::Approx(std::exp(-1.0) * 0.125).epsilon(1e-13));
    CHECK(u.residual <= 1e-12);
    const auto z = prop61_step(F, std::log(0.125), std::log(0.125), 0.0);
    CHECK(z.log_f == doctest::Approx(std::log(0.125)).epsilon(1e-15));
}

TEST_CASE("threshold recursion along a stopped Brownian path") {
    const auto F = presets::inverse_square().components[0].kernel;
    std::mt19937_64 rng(5);
    const auto w = stopped_brownian(1.0, 1024, rng);
    const auto r = prop61_thresholds(F, w, 16);
    CHECK(r.nonincreasing);
    CHECK(r.within_mesh);
    CHECK(r.max_residual <= 1e-9);
    REQUIRE(r.levels.size() >= 16);
    for (const auto& lvl : r.levels) {
        if (lvl.n < 1) continue;
        CAPTURE(lvl.n);
        CHECK(lvl.max_log_threshold <= -std::log(double(lvl.n)) + 1e-12);
    }
}

TEST_CASE("stopped Brownian path stays in the unit band after stopping") {
    std::mt19937_64 rng(9);
    const auto w = stopped_brownian(1.0, 2048, rng);
    bool stopped = false;
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        if (stopped) CHECK(std::abs(w.x[i]) == 1.0);
        if (std::abs(w.x[i]) >= 1.0) stopped = true;
    }
}

TEST_CASE("scenario registry") {
    const auto ids = scenario_ids();
    CHECK(ids.size() == 7);
    CHECK(code_of([] { reproduce("nope"); }) == ErrorCode::UnknownScenario);
}

TEST_CASE("scenario reports are reproducible") {
    for (const char* id : {"ex-3.8", "lemma-5.10"}) {
        CAPTURE(id);
        const auto a = reproduce(id, 42);
        const auto b = reproduce(id, 42);
        CHECK(a.pass());
        CHECK(a.to_json() == b.to_json());
    }
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "purejump/error.hpp"
#include "purejump/numerics.hpp"

using namespace purejump;
using namespace purejump::numerics;

TEST_CASE("compensated sum keeps small addends") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) s.add(1e-16);
    CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature on smooth and peaked integrands") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    const auto r = integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-9));
}

TEST_CASE("endpoint power singularities") {
    // int_0^1 x^-0.5 dx = 2
    const auto r = integrate_power_singular([](double x) { return 1.0 / std::sqrt(x); }, 1.0, -0.5);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_THROWS_AS(integrate_power_singular([](double x) { return 1.0 / x; }, 1.0, -1.0), Error);
}

TEST_CASE("series: convergent power tails are summed with the tail estimate") {
    const auto s = sum_series([](long k) { return 1.0 / (double(k) * double(k)); }, 1, std::nullopt);
    REQUIRE(s.is_finite());
    CHECK(s.value() == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-10));
}

TEST_CASE("series: harmonic divergence carries a power-tail certificate") {
    const auto s = sum_series([](long k) { return 1.0 / double(k); }, 1, std::nullopt);
    REQUIRE(s.is_infinite());
    CHECK(s.certificate().kind == DivergenceCertificate::Kind::PowerTail);
}

TEST_CASE("series: support starting late is not extrapolated over empty terms") {
    const auto s = sum_series([](long k) { return k < 50000 ? 0.0 : 1.0 / (double(k) * double(k)); }, 1,
                              std::nullopt);
    REQUIRE(s.is_finite());
    double head = 0.0;
    for (long k = 1; k < 50000; ++k) head += 1.0 / (double(k) * double(k));
    CHECK(s.value() == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0 - head).epsilon(1e-7));
}

TEST_CASE("series: finite ranges are summed directly") {
    const auto s = sum_series([](long k) { return double(k); }, 1, 100L);
    CHECK(s.value() == 5050.0);
}

TEST_CASE("geometric shells: convergent and divergent") {
    const auto c = accumulate_shells([](int k) { return std::ldexp(1.0, -k); });
    REQUIRE(c.is_finite());
    CHECK(c.value() == doctest::Approx(2.0).epsilon(1e-12));
    const auto d = accumulate_shells([](int) { return 1.0; });
    CHECK(d.is_infinite());
}

TEST_CASE("brent finds bracketed roots and rejects unbracketed ones") {
    CHECK(brent([](double x) { return x * x - 2.0; }, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    try {
        brent([](double x) { return x * x + 1.0; }, -1.0, 1.0);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RootFindFailure);
    }
}

TEST_CASE("power tail estimate") {
    double direct = 0.0;
    for (long k = 1000; k < 100000000; ++k) direct += 1.0 / (double(k) * double(k) * double(k));
    CHECK(power_tail(1.0, -3.0, 1000) == doctest::Approx(direct).epsilon(1e-6));
}

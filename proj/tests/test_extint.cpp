#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "purejump/error.hpp"
#include "purejump/extint.hpp"
#include "purejump/presets.hpp"
#include "purejump/simulate.hpp"

using namespace purejump;

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

TEST_CASE("second moment of the time-dependent density") {
    const auto s = presets::ex38();
    for (double T : {1.0, 5.0, 10.0}) {
        CAPTURE(T);
        const auto c = star_nu(parse_integrand("x^2"), s, T);
        CHECK(std::abs(c(T) - 2.0 * std::log1p(T)) < 1e-8);
    }
}

TEST_CASE("odd integrand on a symmetric kernel is sigma-integrable with zero integral") {
    const auto c = star_nu(Integrand::identity(), presets::ex38(), 1.0);
    CHECK(std::abs(c(1.0)) < 1e-12);
}

TEST_CASE("star_nu refuses integrands outside the sigma-integrable class") {
    CHECK(code_of([] { star_nu(Integrand::identity(), presets::ex516(), 1.0); }) ==
          ErrorCode::NotSigmaIntegrable);
}

TEST_CASE("time-changed step process: partial sums of 1/k^2") {
    const double T = std::atan(1e4);
    const auto c = star_nu(Integrand::identity(), presets::ex313(2), T);
    double s = 0.0;
    for (long k = 10000; k >= 1; --k) s += 1.0 / (double(k) * double(k));
    CHECK(std::abs(c(T) - s) < 1e-9);
}

TEST_CASE("reciprocal integrand is not integrable against the time-changed process") {
    const auto comp = presets::ex313(2);
    const auto z = TimeFunction::inv_phi_tan();
    CHECK(zeta_integrable(z, comp).non_member());
    CHECK(l_sigma_mu_member(Integrand::identity().times(z), comp).non_member());
    const SamplePath y = poisson_phi_process(2, std::atan(200.0), 1);
    CHECK(code_of([&] { stoch_integral(z, y, &comp); }) == ErrorCode::NotIntegrable);
}

TEST_CASE("stochastic integral of a step function") {
    const SamplePath p = intro_process(2, 200);
    const auto z = TimeFunction::indicator(1.0, 1.5);
    const SamplePath r = stoch_integral(z, p);
    double want = 0.0;
    for (const auto& e : p.events) {
        if (e.t > 1.0 && e.t <= 1.5) want += e.dx;
    }
    CHECK(r.value(2.0) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("pathwise identities on small ensembles") {
    for (const std::string name : {"intro", "one-sided", "sec-5.4", "qc-dp-mixture", "poisson", "inverse-square"}) {
        CAPTURE(name);
        auto c = presets::by_name(name);
        if (c.name == "intro") c = presets::intro(5000);
        const auto ens = simulate_ensemble(c, 3, 17);
        CHECK(jump_representation_discrepancy(c, ens) <= 1e-10);
        if (l_sigma_mu_member(Integrand::identity(), c).non_member()) {
            CHECK_THROWS_AS(check_associativity(Integrand::identity(), TimeFunction::constant(2.0), c, ens), Error);
            CHECK_THROWS_AS(transform_path(parse_smooth_function("sin"), ens.paths[0], &c), Error);
            continue;
        }
        CHECK(transform_path(parse_smooth_function("sin"), ens.paths[0], &c).max_discrepancy <= 1e-10);
        const auto z = check_associativity(Integrand::identity(), TimeFunction::step({0.3, 0.6}, {1.0, -0.5, 0.25}),
                                           c, ens);
        CHECK(z.ok);
        CHECK(z.max_discrepancy <= 1e-10);
        const auto q = check_associativity(Integrand::identity(), parse_integrand("sign(x)|x|^1.5"), c, ens);
        CHECK(q.ok);
        CHECK(q.max_discrepancy <= 1e-10);
    }
}

TEST_CASE("star_mu of x^2 is the quadratic variation") {
    const SamplePath p = intro_process(4, 300);
    const SamplePath q = star_mu_on_path(parse_integrand("x^2"), p, presets::intro(300));
    CHECK(q.value(2.0) == doctest::Approx(p.qv(2.0)).epsilon(1e-13));
}

TEST_CASE("image spec of a power map") {
    const auto img = image_spec(parse_integrand("sign(x)|x|^2"), presets::inverse_square());
    // image density |y|^-1.5 / 2 on 0 < |y| <= 1
    const auto m = kernel::moment(img.components[0].kernel, Slice{0.0, -1}, 1.0, Region::all());
    CHECK(m.absolute.value() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("integrand and function parsing") {
    CHECK(parse_integrand("-2*x")(0.0, 0.5) == doctest::Approx(-1.0));
    CHECK(parse_integrand("|x|^0.5@|x|<=1")(0.0, 4.0) == 0.0);
    CHECK(parse_integrand("|x|^0.5@|x|<=1")(0.0, -0.25) == doctest::Approx(0.5));
    CHECK(code_of([] { star_nu(parse_integrand("x^2"), presets::inverse_square(), 1.0); }) == static_cast<ErrorCode>(0));
    CHECK(parse_region("0.5<|x|<=1").contains(-0.75));
    CHECK_FALSE(parse_region("0.5<|x|<=1 u (2,3]").contains(-2.5));
    CHECK(parse_region("0.5<|x|<=1 u (2,3]").contains(2.5));
    CHECK(code_of([] { parse_integrand("x^^2"); }) == ErrorCode::ParseError);
    CHECK(parse_smooth_function("exp").d2f(0.0) == doctest::Approx(1.0));
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "purejump/error.hpp"
#include "purejump/kernel.hpp"
#include "purejump/presets.hpp"

using namespace purejump;

namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

KernelSpec power_law(double alpha, double cutoff = 1.0, bool symmetric = true) {
    PowerLaw k;
    k.alpha = {alpha, 0.0};
    k.cutoff = cutoff;
    k.symmetric = symmetric;
    return KernelSpec{k};
}

}  // namespace

TEST_CASE("power-law moments in closed form") {
    const auto k = power_law(0.5);
    const Slice s{0.5, -1};
    // 2 int_0^1 x^{2 - 1.5} dx
    const auto m2 = kernel::moment(k, s, 2.0, Region::small_jumps());
    REQUIRE(m2.absolute.is_finite());
    CHECK(m2.absolute.value() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(m2.signed_value == doctest::Approx(0.0));
    const auto m1 = kernel::moment(k, s, 1.0, Region::small_jumps());
    CHECK(m1.absolute.value() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(kernel::moment(power_law(1.5), s, 1.0, Region::small_jumps()).absolute.is_infinite());
}

TEST_CASE("one-sided power law has a signed first moment") {
    const auto k = power_law(0.5, 1.0, false);
    const auto m = kernel::moment(k, Slice{0.0, -1}, 1.0, Region::all());
    CHECK(m.absolute.value() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.signed_value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(kernel::mass(k, Slice{0.0, -1}, Region::negative(0.0, 1.0)) == 0.0);
}

TEST_CASE("big-jump mass of the stable kernel") {
    const auto s = presets::alpha_stable(1.5, 0.0);
    const double m = kernel::mass(s.components[0].kernel, Slice{0.0, -1}, Region::big_jumps());
    CHECK(m == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK_THROWS_AS(kernel::mass(s.components[0].kernel, Slice{0.0, -1}, Region::small_jumps()), Error);
}

TEST_CASE("atom family second moment") {
    // sum 2 k^2 9^k / (k^4 9^k) = 2 zeta(2)
    const auto s = presets::ex516();
    const auto m = kernel::moment(s.components[0].kernel, Slice{0.0, -1}, 2.0, Region::all());
    REQUIRE(m.absolute.is_finite());
    CHECK(m.absolute.value() == doctest::Approx(kPi2 / 3.0).epsilon(1e-8));
    CHECK(kernel::moment(s.components[0].kernel, Slice{0.0, -1}, 1.0, Region::all()).absolute.is_infinite());
}

TEST_CASE("clock masses") {
    CHECK(kernel::clock_mass(ClockSpec{Lebesgue{{2.0, 0.0}}}, 0.0, 1.5) == doctest::Approx(3.0));
    CHECK(kernel::clock_mass(ClockSpec{TanChange{1.0}}, 0.0, std::atan(5.0)) == doctest::Approx(5.0));
    CHECK(kernel::clock_mass(ClockSpec{TanChange{1.0}}, 0.0, 2.0) == kInf);
    CHECK(kernel::clock_is_atomic(presets::intro().components[0].clock));
    CHECK_FALSE(kernel::clock_is_atomic(ClockSpec{Lebesgue{}}));
}

TEST_CASE("generated fixed times") {
    const auto& f = std::get<FixedTimes>(presets::intro().components[0].clock.v);
    CHECK(kernel::atom_time(f, 1) == doctest::Approx(1.0));
    CHECK(kernel::atom_time(f, 4) == doctest::Approx(1.75));
    const auto r = kernel::atom_index_range(f, 1.0, 1.8);
    CHECK(r.first == 2);
    CHECK(r.second == 5);
    const auto atoms = kernel::clock_atoms(f, 0.0, 1.5, 100);
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[1].first.atom == 2);
}

TEST_CASE("dyadic level grid") {
    const auto s = presets::inverse_square();
    const auto g = kernel::level_grid(s, 20);
    CHECK_FALSE(g.atom_aligned);
    CHECK(g.lower(0) == 0.5);
    CHECK(g.upper(0) == kInf);
    CHECK(g.lower(3) == 1.0 / 16.0);
    CHECK(g.level_of(0.5) == 1);
    CHECK(g.level_of(0.51) == 0);
    CHECK(g.level_of(1.0 / 16.0) == 4);
    CHECK(g.untruncated(2).contains(0.25));
    CHECK_FALSE(g.untruncated(2).contains(0.26));
}

TEST_CASE("dyadic shell masses of the inverse-square kernel") {
    const auto s = presets::inverse_square();
    CHECK(kernel::shell_mass(s, 0, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    for (int j = 1; j < 8; ++j) {
        CAPTURE(j);
        CHECK(kernel::shell_mass(s, j, 0.5) == doctest::Approx(std::ldexp(2.0, j)).epsilon(1e-12));
        CHECK(kernel::shell_mass(s, j, 0.5, kernel::ShellSide::Positive) ==
              doctest::Approx(std::ldexp(1.0, j)).epsilon(1e-12));
    }
}

TEST_CASE("atom-aligned grid follows the atom sizes") {
    const auto s = presets::intro(1000);
    const auto g = kernel::level_grid(s, 50);
    REQUIRE(g.atom_aligned);
    for (int n = 1; n < 40; ++n) {
        CAPTURE(n);
        CHECK(g.level_of(1.0 / n) == n - 1);
    }
}

TEST_CASE("atom-aligned scheme on a diffuse kernel is rejected") {
    auto s = presets::inverse_square();
    s.scheme.kind = TruncationScheme::Kind::AtomAligned;
    try {
        kernel::level_grid(s, 10);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidScheme);
    }
}

TEST_CASE("atom limsup near zero") {
    CHECK_FALSE(kernel::atom_limsup_vanishes(presets::ex516(), kernel::Side::FromAbove).vanishes);
    CHECK(kernel::atom_limsup_vanishes(presets::inverse_square(), kernel::Side::FromAbove).vanishes);
}

TEST_CASE("samples stay inside the region") {
    std::mt19937_64 rng(7);
    const auto k = power_law(0.5);
    const Region r = Region::abs_band(0.125, 0.25);
    for (int i = 0; i < 2000; ++i) {
        const double x = kernel::sample(k, Slice{0.0, -1}, r, rng);
        REQUIRE(r.contains(x));
    }
    try {
        kernel::sample(power_law(0.5, 0.1), Slice{0.0, -1}, Region::big_jumps(), rng);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyRegion);
    }
}

TEST_CASE("validation rejects kernels without the second-moment condition") {
    auto s = presets::inverse_square();
    std::get<PowerLaw>(s.components[0].kernel.v).alpha = {2.0, 0.0};
    CHECK_THROWS_AS(kernel::validate(s), Error);
    CHECK_NOTHROW(kernel::validate(presets::ex38()));
}

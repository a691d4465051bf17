#include <doctest.h>

#include <map>
#include <string>

#include <json.hpp>

#include "purejump/classify.hpp"
#include "purejump/presets.hpp"

using namespace purejump;

TEST_CASE("preset classes") {
    const std::map<std::string, std::string> want{
        {"intro", "J4\\J5"},          {"ex-3.8", "J4\\J5"},      {"ex-3.13", "J5\\J6"},
        {"alpha-stable", "J2\\J3"},   {"ex-5.16", "J3\\J4"},     {"inverse-square", "J2\\J3"},
        {"sec-5.4", "J5\\J6"},        {"one-sided", "J5\\J6"},   {"poisson", "J6"},
        {"qc-dp-mixture", "J5\\J6"},  {"alternating-drift", "J5\\J6"},
    };
    for (const auto& name : presets::names()) {
        CAPTURE(name);
        const ClassReport r = classify(presets::by_name(name));
        REQUIRE(want.count(name) == 1);
        CHECK(r.summary() == want.at(name));
        CHECK(r.chain_consistent());
        for (const auto& f : r.flags) CHECK(f.flag != Membership::Undecided);
    }
}

TEST_CASE("intro: J5 fails through the harmonic series") {
    const ClassReport r = classify(presets::intro());
    CHECK(r.j(4).member());
    REQUIRE(r.j(5).non_member());
    REQUIRE(r.j(5).witness.value.has_value());
    CHECK(r.j(5).witness.value->is_infinite());
    CHECK(r.j(5).witness.value->certificate().kind == DivergenceCertificate::Kind::PowerTail);
}

TEST_CASE("stable table") {
    for (double a : {0.25, 0.5, 0.75, 1.0, 1.5, 1.9}) {
        for (double beta : {0.0, 1.0}) {
            CAPTURE(a);
            CAPTURE(beta);
            const ClassReport r = classify(presets::alpha_stable(a, beta));
            if (a < 1.0) {
                CHECK(r.summary() == (beta == 0.0 ? "J5\\J6" : "J1\\J2"));
            } else {
                CHECK(r.summary() == "J2\\J3");
                CHECK(r.j(2).member());
                CHECK(r.j(3).non_member());
            }
        }
    }
}

TEST_CASE("drift mismatch leaves J2") {
    auto s = presets::one_sided(0.5);
    s.drift.mode = DriftSpec::Mode::Explicit;
    s.drift.beta = {0.0, 0.0};
    const ClassReport r = classify(s);
    CHECK(r.j(1).member());
    CHECK(r.j(2).non_member());
    CHECK(r.summary() == "J1\\J2");
}

TEST_CASE("atom obstruction on the geometric family") {
    const auto ob = j3_obstruction(presets::ex516());
    CHECK_FALSE(ob.holds);
    CHECK(ob.witness.find("3^k") != std::string::npos);
    CHECK(j3_obstruction(presets::inverse_square()).holds);
}

TEST_CASE("integrand membership for the time-dependent density") {
    const auto s = presets::ex38();
    CHECK(l_mu_member(Integrand::identity(), s).non_member());
    CHECK(l_sigma_mu_member(Integrand::identity(), s).member());
}

TEST_CASE("band restriction removes small jumps") {
    const auto r = classify(restrict_band(presets::inverse_square(), 0.25, 1.0));
    CHECK(r.j(6).member());
}

TEST_CASE("report serialisation") {
    const ClassReport r = classify(presets::ex516());
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j.contains("flags"));
    CHECK(r.to_text().find("class: J3\\J4") != std::string::npos);
}

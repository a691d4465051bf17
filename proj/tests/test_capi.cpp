#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "purejump/purejump.h"

namespace {

std::string take(char* p) {
    std::string s = p ? p : "";
    pj_string_free(p);
    return s;
}

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::strcmp(pj_status_name(PJ_OK), "Ok") == 0);
    CHECK(std::strcmp(pj_status_name(PJ_E_PARSE), "ParseError") == 0);
    CHECK(std::strcmp(pj_status_name(PJ_E_INTERNAL), "Internal") == 0);
    CHECK(std::strlen(pj_version()) > 0);
}

TEST_CASE("presets classify through the C interface") {
    pj_spec* s = nullptr;
    REQUIRE(pj_spec_preset("ex-5.16", &s) == PJ_OK);
    int flags[6];
    char* text = nullptr;
    REQUIRE(pj_classify(s, flags, &text, nullptr) == PJ_OK);
    CHECK(flags[2] == PJ_MEMBER);
    CHECK(flags[3] == PJ_NON_MEMBER);
    CHECK(take(text).find("J3\\J4") != std::string::npos);
    pj_spec_free(s);
}

TEST_CASE("errors carry a status and a message") {
    pj_spec* s = nullptr;
    CHECK(pj_spec_preset("no-such", &s) == PJ_E_INVALID_ARGUMENT);
    CHECK(std::strlen(pj_last_error()) > 0);
    CHECK(pj_spec_parse("{", &s) == PJ_E_PARSE);
    CHECK(pj_spec_load("/nonexistent.json", &s) == PJ_E_IO);
    const auto corrupt = std::filesystem::path(PUREJUMP_SOURCE_DIR) / "tests" / "data" / "corrupt.json";
    CHECK(pj_spec_load(corrupt.string().c_str(), &s) == PJ_E_PARSE);
    CHECK(pj_classify(nullptr, nullptr, nullptr, nullptr) == PJ_E_INVALID_ARGUMENT);
    CHECK(pj_reproduce("nope", 1, nullptr, nullptr, nullptr) == PJ_E_UNKNOWN_SCENARIO);
    CHECK(pj_drift_pinning(13, nullptr, nullptr) == PJ_E_BUDGET);
}

TEST_CASE("spec documents round-trip") {
    pj_spec* s = nullptr;
    REQUIRE(pj_spec_preset("qc-dp-mixture", &s) == PJ_OK);
    char* json = nullptr;
    REQUIRE(pj_spec_to_json(s, &json) == PJ_OK);
    const std::string a = take(json);
    pj_spec* t = nullptr;
    REQUIRE(pj_spec_parse(a.c_str(), &t) == PJ_OK);
    REQUIRE(pj_spec_to_json(t, &json) == PJ_OK);
    CHECK(take(json) == a);
    double h = 0.0;
    CHECK(pj_spec_horizon(t, &h) == PJ_OK);
    CHECK(h == 1.0);
    pj_spec_free(s);
    pj_spec_free(t);
}

TEST_CASE("ensembles through opaque handles") {
    pj_spec* s = nullptr;
    REQUIRE(pj_spec_preset("poisson", &s) == PJ_OK);
    pj_ensemble* a = nullptr;
    pj_ensemble* b = nullptr;
    REQUIRE(pj_simulate(s, 10, 3, -1, 1, &a) == PJ_OK);
    REQUIRE(pj_simulate(s, 10, 3, -1, 2, &b) == PJ_OK);
    CHECK(pj_ensemble_size(a) == 10);
    for (size_t i = 0; i < 10; ++i) {
        size_t na = 0, nb = 0;
        REQUIRE(pj_ensemble_event_count(a, i, &na) == PJ_OK);
        REQUIRE(pj_ensemble_event_count(b, i, &nb) == PJ_OK);
        CHECK(na == nb);
        double va = 0.0, vb = 0.0;
        pj_ensemble_value(a, i, 1.0, &va);
        pj_ensemble_value(b, i, 1.0, &vb);
        CHECK(va == vb);
        // unit jumps and matching drift: X_1 counts the jumps
        CHECK(va == static_cast<double>(na));
    }
    CHECK(pj_ensemble_value(a, 10, 1.0, nullptr) == PJ_E_INVALID_ARGUMENT);
    char* csv = nullptr;
    REQUIRE(pj_ensemble_path_csv(a, 0, 4, &csv) == PJ_OK);
    CHECK(take(csv).rfind("t,value,jump", 0) == 0);
    char* meta = nullptr;
    REQUIRE(pj_ensemble_metadata(a, &meta) == PJ_OK);
    CHECK(take(meta).find("purejump.ensemble") != std::string::npos);
    pj_ensemble_free(a);
    pj_ensemble_free(b);
    pj_spec_free(s);
}

TEST_CASE("integrals through the C interface") {
    pj_spec* s = nullptr;
    REQUIRE(pj_spec_preset("ex-3.8", &s) == PJ_OK);
    char* csv = nullptr;
    REQUIRE(pj_star_nu_csv(s, "x^2", 1.0, 4, &csv) == PJ_OK);
    const std::string c = take(csv);
    CHECK(c.rfind("t,value\n", 0) == 0);
    CHECK(pj_star_nu_csv(s, "x^^", 1.0, 4, &csv) == PJ_E_PARSE);
    pj_spec_free(s);

    REQUIRE(pj_spec_preset("one-sided", &s) == PJ_OK);
    double disc = 1.0;
    REQUIRE(pj_transform_csv(s, "sin", 1, 0, &csv, &disc) == PJ_OK);
    pj_string_free(csv);
    CHECK(disc <= 1e-10);
    pj_spec_free(s);
}

TEST_CASE("decomposition and pinning through the C interface") {
    pj_spec* s = nullptr;
    REQUIRE(pj_spec_preset("qc-dp-mixture", &s) == PJ_OK);
    char *qc = nullptr, *dp = nullptr;
    REQUIRE(pj_decompose(s, &qc, &dp, nullptr) == PJ_OK);
    pj_spec* q = nullptr;
    CHECK(pj_spec_parse(qc, &q) == PJ_OK);
    pj_spec_free(q);
    pj_string_free(qc);
    pj_string_free(dp);
    pj_spec_free(s);
    double ratio = 0.0;
    int half = 0;
    REQUIRE(pj_drift_pinning(6, &ratio, &half) == PJ_OK);
    CHECK(half == 1);
    CHECK(ratio >= 0.5);
}

TEST_CASE("scenarios through the C interface") {
    char* ids = nullptr;
    REQUIRE(pj_scenario_ids(&ids) == PJ_OK);
    CHECK(take(ids).find("prop-6.1") != std::string::npos);
    int pass = 0;
    char* json = nullptr;
    REQUIRE(pj_reproduce("lemma-5.10", 42, &pass, nullptr, &json) == PJ_OK);
    CHECK(pass == 1);
    CHECK(take(json).find("\"checks\"") != std::string::npos);
}

#include <doctest.h>

#include <filesystem>
#include <string>

#include "purejump/config.hpp"
#include "purejump/error.hpp"
#include "purejump/presets.hpp"

using namespace purejump;

namespace {

ErrorCode code_of(const std::string& text) {
    try {
        config::parse_spec(text);
    } catch (const Error& e) {
        return e.code();
    }
    return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("every preset round-trips through the canonical document") {
    for (const auto& name : presets::names()) {
        CAPTURE(name);
        const auto s = presets::by_name(name);
        const std::string a = config::to_json(s);
        const std::string b = config::to_json(config::parse_spec(a));
        CHECK(a == b);
    }
}

TEST_CASE("shipped spec files load and match their presets") {
    const std::filesystem::path dir = std::filesystem::path(PUREJUMP_SOURCE_DIR) / "data" / "specs";
    REQUIRE(std::filesystem::exists(dir));
    int seen = 0;
    for (const auto& name : presets::names()) {
        const auto p = dir / (name + ".json");
        if (!std::filesystem::exists(p)) continue;
        ++seen;
        CAPTURE(name);
        CHECK(config::to_json(config::load_spec_file(p.string())) == config::to_json(presets::by_name(name)));
    }
    CHECK(seen == static_cast<int>(presets::names().size()));
}

TEST_CASE("truncated document is a parse error") {
    const std::filesystem::path p = std::filesystem::path(PUREJUMP_SOURCE_DIR) / "tests" / "data" / "corrupt.json";
    try {
        config::load_spec_file(p.string());
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

TEST_CASE("semantic errors are InvalidSpec") {
    CHECK(code_of(R"({"schema":"other","version":1})") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"schema":"purejump.compensator","version":7})") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"schema":"purejump.compensator","version":1,"horizon":1,
        "components":[{"id":0,"kernel":{"type":"no-such"},"clock":{"type":"lebesgue"}}]})") ==
          ErrorCode::InvalidSpec);
    // |x|^{-3}: x^2 ^ 1 not integrable
    CHECK(code_of(R"({"schema":"purejump.compensator","version":1,"horizon":1,
        "components":[{"id":0,"kernel":{"type":"power-law","alpha":2.0},"clock":{"type":"lebesgue"}}]})") ==
          ErrorCode::InvalidSpec);
}

TEST_CASE("missing file is an IO error") {
    try {
        config::load_spec_file("/nonexistent/spec.json");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("infinite numbers are written as strings") {
    const std::string a = config::to_json(presets::alpha_stable(1.5, 0.0));
    CHECK(a.find("\"inf\"") != std::string::npos);
    const auto back = config::parse_spec(a);
    CHECK(std::get<PowerLaw>(back.components.at(0).kernel.v).cutoff == kInf);
}

#include "purejump/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "purejump/error.hpp"

namespace purejump::config {

using nlohmann::json;

namespace {

double num(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        fail(ErrorCode::InvalidSpec, "expected a number, got '" + s + "'");
    }
    if (!j.is_number()) fail(ErrorCode::InvalidSpec, "expected a number, got " + j.dump());
    return j.get<double>();
}

json num_out(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

double get_num(const json& j, const char* key, double def) {
    if (!j.contains(key)) return def;
    return num(j.at(key));
}

TimeLinear linear(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) fail(ErrorCode::InvalidSpec, "linear function needs [c0, c1]");
        return {num(j[0]), num(j[1])};
    }
    return {num(j), 0.0};
}

json linear_out(const TimeLinear& f) {
    if (f.c1 == 0.0) return num_out(f.c0);
    return json::array({num_out(f.c0), num_out(f.c1)});
}

Sides sides(const json& j, const char* key) {
    if (!j.contains(key)) return Sides::Both;
    const auto s = j.at(key).get<std::string>();
    if (s == "both") return Sides::Both;
    if (s == "positive") return Sides::Positive;
    fail(ErrorCode::InvalidSpec, "unknown sides '" + s + "'");
}

const char* sides_out(Sides s) { return s == Sides::Both ? "both" : "positive"; }

std::string type_of(const json& j) {
    if (!j.is_object() || !j.contains("type")) fail(ErrorCode::InvalidSpec, "object needs a 'type'");
    return j.at("type").get<std::string>();
}

KernelSpec kernel_in(const json& j) {
    const auto type = type_of(j);
    if (type == "power-law") {
        PowerLaw k;
        if (j.contains("alpha")) k.alpha = linear(j.at("alpha"));
        k.cutoff = get_num(j, "cutoff", 1.0);
        k.lower = get_num(j, "lower", 0.0);
        k.symmetric = j.value("symmetric", true);
        k.scale = get_num(j, "scale", 1.0);
        return {k};
    }
    if (type == "atom-family") {
        AtomFamily k;
        k.x_scale = get_num(j, "x_scale", k.x_scale);
        k.x_pow = get_num(j, "x_pow", k.x_pow);
        k.x_base = get_num(j, "x_base", k.x_base);
        k.m_scale = get_num(j, "m_scale", k.m_scale);
        k.m_pow = get_num(j, "m_pow", k.m_pow);
        k.m_base = get_num(j, "m_base", k.m_base);
        k.sides = sides(j, "sides");
        k.max_index = j.value("max_index", 0L);
        return {k};
    }
    if (type == "atoms") {
        AtomList k;
        for (const auto& a : j.at("atoms")) {
            if (!a.is_array() || a.size() != 2) fail(ErrorCode::InvalidSpec, "atom entries are [x, mass]");
            k.atoms.push_back({num(a[0]), num(a[1])});
        }
        return {k};
    }
    if (type == "slice-atoms") {
        SliceAtoms k;
        k.x_scale = get_num(j, "x_scale", k.x_scale);
        k.x_pow = get_num(j, "x_pow", k.x_pow);
        k.prob = get_num(j, "prob", k.prob);
        k.sides = sides(j, "sides");
        return {k};
    }
    if (type == "step-atom") {
        StepAtom k;
        k.power = j.value("power", 2);
        k.time_changed = j.value("time_changed", false);
        return {k};
    }
    if (type == "mixture") {
        Mixture k;
        for (const auto& p : j.at("parts")) {
            k.parts.push_back({get_num(p, "weight", 1.0),
                               std::make_shared<const KernelSpec>(kernel_in(p.at("kernel")))});
        }
        return {k};
    }
    fail(ErrorCode::InvalidSpec, "unknown kernel type '" + type + "'");
}

json kernel_out(const KernelSpec& k) {
    return std::visit(
        [](const auto& ker) -> json {
            using T = std::decay_t<decltype(ker)>;
            json j;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                j["type"] = "power-law";
                j["alpha"] = linear_out(ker.alpha);
                j["cutoff"] = num_out(ker.cutoff);
                if (ker.lower != 0.0) j["lower"] = ker.lower;
                j["symmetric"] = ker.symmetric;
                j["scale"] = num_out(ker.scale);
            } else if constexpr (std::is_same_v<T, AtomFamily>) {
                j["type"] = "atom-family";
                j["x_scale"] = ker.x_scale;
                j["x_pow"] = ker.x_pow;
                j["x_base"] = ker.x_base;
                j["m_scale"] = ker.m_scale;
                j["m_pow"] = ker.m_pow;
                j["m_base"] = ker.m_base;
                j["sides"] = sides_out(ker.sides);
                j["max_index"] = ker.max_index;
            } else if constexpr (std::is_same_v<T, AtomList>) {
                j["type"] = "atoms";
                j["atoms"] = json::array();
                for (const auto& [x, m] : ker.atoms) j["atoms"].push_back(json::array({x, m}));
            } else if constexpr (std::is_same_v<T, SliceAtoms>) {
                j["type"] = "slice-atoms";
                j["x_scale"] = ker.x_scale;
                j["x_pow"] = ker.x_pow;
                j["prob"] = ker.prob;
                j["sides"] = sides_out(ker.sides);
            } else if constexpr (std::is_same_v<T, StepAtom>) {
                j["type"] = "step-atom";
                j["power"] = ker.power;
                j["time_changed"] = ker.time_changed;
            } else {
                j["type"] = "mixture";
                j["parts"] = json::array();
                for (const auto& p : ker.parts) {
                    j["parts"].push_back({{"weight", p.weight}, {"kernel", kernel_out(*p.kernel)}});
                }
            }
            return j;
        },
        k.v);
}

ClockSpec clock_in(const json& j) {
    const auto type = type_of(j);
    if (type == "lebesgue") {
        Lebesgue c;
        if (j.contains("rate")) c.rate = linear(j.at("rate"));
        return {c};
    }
    if (type == "tan-change") {
        TanChange c;
        c.rate = get_num(j, "rate", 1.0);
        return {c};
    }
    if (type == "fixed-times") {
        FixedTimes c;
        if (j.contains("generator")) {
            const auto& g = j.at("generator");
            c.generated = true;
            c.base = get_num(g, "base", 0.0);
            c.step = get_num(g, "step", 1.0);
            c.tpow = get_num(g, "tpow", 1.0);
            c.weight = get_num(g, "weight", 1.0);
            c.n_max = g.value("n_max", 100000L);
        } else {
            for (const auto& t : j.at("times")) c.times.push_back(num(t));
            if (j.contains("weights")) {
                for (const auto& w : j.at("weights")) c.weights.push_back(num(w));
            } else {
                c.weights.assign(c.times.size(), 1.0);
            }
        }
        return {c};
    }
    fail(ErrorCode::InvalidSpec, "unknown clock type '" + type + "'");
}

json clock_out(const ClockSpec& c) {
    json j;
    if (const auto* lb = std::get_if<Lebesgue>(&c.v)) {
        j["type"] = "lebesgue";
        j["rate"] = linear_out(lb->rate);
    } else if (const auto* tc = std::get_if<TanChange>(&c.v)) {
        j["type"] = "tan-change";
        j["rate"] = tc->rate;
    } else {
        const auto& f = std::get<FixedTimes>(c.v);
        j["type"] = "fixed-times";
        if (f.generated) {
            j["generator"] = {{"base", f.base}, {"step", f.step}, {"tpow", f.tpow},
                              {"weight", f.weight}, {"n_max", f.n_max}};
        } else {
            j["times"] = f.times;
            j["weights"] = f.weights;
        }
    }
    return j;
}

CompensatorSpec spec_in(const json& j) {
    if (!j.is_object()) fail(ErrorCode::InvalidSpec, "document must be an object");
    if (j.value("schema", std::string()) != kSchemaName) {
        fail(ErrorCode::InvalidSpec, std::string("schema must be '") + kSchemaName + "'");
    }
    if (j.value("version", 0) != kSchemaVersion) fail(ErrorCode::InvalidSpec, "unsupported schema version");
    CompensatorSpec s;
    s.name = j.value("name", std::string());
    s.horizon = get_num(j, "horizon", 1.0);
    for (const auto& c : j.at("components")) {
        Component comp;
        comp.id = c.value("id", static_cast<int>(s.components.size()));
        comp.kernel = kernel_in(c.at("kernel"));
        comp.clock = clock_in(c.at("clock"));
        s.components.push_back(std::move(comp));
    }
    if (j.contains("drift")) {
        const auto& d = j.at("drift");
        const auto mode = d.value("mode", std::string("explicit"));
        if (mode == "explicit") {
            s.drift.mode = DriftSpec::Mode::Explicit;
        } else if (mode == "matching") {
            s.drift.mode = DriftSpec::Mode::Matching;
        } else {
            fail(ErrorCode::InvalidSpec, "unknown drift mode '" + mode + "'");
        }
        if (d.contains("beta")) s.drift.beta = linear(d.at("beta"));
    }
    if (j.contains("scheme")) {
        const auto& sc = j.at("scheme");
        const auto kind = sc.value("kind", std::string("auto"));
        if (kind == "auto") {
            s.scheme.kind = TruncationScheme::Kind::Auto;
        } else if (kind == "dyadic") {
            s.scheme.kind = TruncationScheme::Kind::Dyadic;
        } else if (kind == "atom-aligned") {
            s.scheme.kind = TruncationScheme::Kind::AtomAligned;
        } else {
            fail(ErrorCode::InvalidSpec, "unknown scheme kind '" + kind + "'");
        }
        s.scheme.levels = sc.value("levels", 20);
        if (s.scheme.levels < 0) fail(ErrorCode::InvalidSpec, "levels must be nonnegative");
        const auto ld = sc.value("level_drift", std::string("none"));
        if (ld == "none") {
            s.scheme.level_drift = TruncationScheme::LevelDrift::None;
        } else if (ld == "alternating") {
            s.scheme.level_drift = TruncationScheme::LevelDrift::Alternating;
        } else {
            fail(ErrorCode::InvalidSpec, "unknown level_drift '" + ld + "'");
        }
        s.scheme.alt_amplitude = get_num(sc, "amplitude", 1.0);
    }
    return s;
}

}  // namespace

CompensatorSpec parse_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, e.what());
    }
    CompensatorSpec s;
    try {
        s = spec_in(j);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidSpec, e.what());
    }
    kernel::validate(s);
    return s;
}

CompensatorSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string to_json(const CompensatorSpec& spec, int indent) {
    json j;
    j["schema"] = kSchemaName;
    j["version"] = kSchemaVersion;
    j["name"] = spec.name;
    j["horizon"] = num_out(spec.horizon);
    j["components"] = json::array();
    for (const auto& c : spec.components) {
        j["components"].push_back({{"id", c.id}, {"kernel", kernel_out(c.kernel)}, {"clock", clock_out(c.clock)}});
    }
    j["drift"] = {{"mode", spec.drift.mode == DriftSpec::Mode::Matching ? "matching" : "explicit"},
                  {"beta", linear_out(spec.drift.beta)}};
    const char* kind = "auto";
    if (spec.scheme.kind == TruncationScheme::Kind::Dyadic) kind = "dyadic";
    if (spec.scheme.kind == TruncationScheme::Kind::AtomAligned) kind = "atom-aligned";
    j["scheme"] = {{"kind", kind},
                   {"levels", spec.scheme.levels},
                   {"level_drift", spec.scheme.level_drift == TruncationScheme::LevelDrift::Alternating
                                       ? "alternating"
                                       : "none"},
                   {"amplitude", spec.scheme.alt_amplitude}};
    return j.dump(indent);
}

}  // namespace purejump::config

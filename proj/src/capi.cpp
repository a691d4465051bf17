#include "purejump/purejump.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "purejump/classify.hpp"
#include "purejump/config.hpp"
#include "purejump/decompose.hpp"
#include "purejump/error.hpp"
#include "purejump/extint.hpp"
#include "purejump/paperlab.hpp"
#include "purejump/presets.hpp"
#include "purejump/simulate.hpp"
#include "purejump/topology.hpp"

struct pj_spec {
    purejump::CompensatorSpec spec;
};

struct pj_ensemble {
    purejump::Ensemble ens;
    purejump::CompensatorSpec spec;
};

namespace {

using purejump::Error;
using purejump::ErrorCode;

static_assert(static_cast<int>(ErrorCode::IoError) == PJ_E_IO);
static_assert(static_cast<int>(ErrorCode::HypothesisViolation) == PJ_E_HYPOTHESIS);

thread_local std::string g_last_error;

int set_error(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <class F>
int guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return PJ_OK;
    } catch (const Error& e) {
        return set_error(static_cast<int>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(PJ_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(PJ_E_INTERNAL, e.what());
    } catch (...) {
        return set_error(PJ_E_INTERNAL, "unknown failure");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void put(char** out, const std::string& s) {
    if (out) *out = dup(s);
}

void need(const void* p, const char* what) {
    if (!p) purejump::fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

const purejump::SamplePath& path_at(const pj_ensemble* e, size_t i) {
    need(e, "ensemble");
    if (i >= e->ens.paths.size()) purejump::fail(ErrorCode::InvalidArgument, "path index out of range");
    return e->ens.paths[i];
}

std::string join_lines(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
}

std::string fv_csv(const purejump::FvCurve& c, double T, int grid) {
    std::ostringstream os;
    os.precision(17);
    os << "t,value\n";
    std::vector<double> ts;
    for (int i = 0; i <= grid; ++i) ts.push_back(T * i / grid);
    for (double k : c.knots()) if (k <= T) ts.push_back(k);
    for (const auto& a : c.atoms()) if (a.first <= T) ts.push_back(a.first);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (double t : ts) os << t << "," << c(t) << "\n";
    return os.str();
}

}  // namespace

extern "C" {

const char* pj_version(void) { return "1.0.0"; }

const char* pj_status_name(int status) {
    if (status == PJ_OK) return "Ok";
    if (status == PJ_E_INTERNAL) return "Internal";
    if (status >= PJ_E_INVALID_ARGUMENT && status <= PJ_E_IO)
        return purejump::error_code_name(static_cast<ErrorCode>(status));
    return "UnknownStatus";
}

const char* pj_last_error(void) { return g_last_error.c_str(); }

void pj_string_free(char* s) { std::free(s); }

int pj_spec_parse(const char* json, pj_spec** out) {
    return guarded([&] {
        need(json, "text");
        need(out, "out");
        *out = new pj_spec{purejump::config::parse_spec(json)};
    });
}

int pj_spec_load(const char* path, pj_spec** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new pj_spec{purejump::config::load_spec_file(path)};
    });
}

int pj_spec_preset(const char* name, pj_spec** out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = new pj_spec{purejump::presets::by_name(name)};
    });
}

int pj_preset_names(char** out) {
    return guarded([&] {
        need(out, "out");
        put(out, join_lines(purejump::presets::names()));
    });
}

int pj_spec_to_json(const pj_spec* spec, char** out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        put(out, purejump::config::to_json(spec->spec));
    });
}

int pj_spec_horizon(const pj_spec* spec, double* out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        *out = spec->spec.horizon;
    });
}

void pj_spec_free(pj_spec* spec) { delete spec; }

int pj_classify(const pj_spec* spec, int flags[6], char** text, char** json) {
    return guarded([&] {
        need(spec, "spec");
        const purejump::ClassReport r = purejump::classify(spec->spec);
        if (flags) {
            for (int i = 0; i < 6; ++i) flags[i] = static_cast<int>(r.flags[static_cast<std::size_t>(i)].flag);
        }
        put(text, r.to_text());
        put(json, r.to_json());
    });
}

int pj_simulate(const pj_spec* spec, size_t paths, uint64_t seed, int levels, unsigned threads, pj_ensemble** out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        purejump::SimOptions o;
        o.levels = levels;
        o.threads = threads;
        auto* e = new pj_ensemble{purejump::simulate_ensemble(spec->spec, paths, seed, o), spec->spec};
        *out = e;
    });
}

size_t pj_ensemble_size(const pj_ensemble* ens) { return ens ? ens->ens.paths.size() : 0; }

int pj_ensemble_value(const pj_ensemble* ens, size_t path, double t, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = path_at(ens, path).value(t);
    });
}

int pj_ensemble_event_count(const pj_ensemble* ens, size_t path, size_t* out) {
    return guarded([&] {
        need(out, "out");
        *out = path_at(ens, path).events.size();
    });
}

int pj_ensemble_event(const pj_ensemble* ens, size_t path, size_t i, double* t, double* dx) {
    return guarded([&] {
        const auto& p = path_at(ens, path);
        if (i >= p.events.size()) purejump::fail(ErrorCode::InvalidArgument, "event index out of range");
        if (t) *t = p.events[i].t;
        if (dx) *dx = p.events[i].dx;
    });
}

int pj_ensemble_path_csv(const pj_ensemble* ens, size_t path, int grid, char** out) {
    return guarded([&] {
        need(out, "out");
        put(out, purejump::path_csv(path_at(ens, path), grid));
    });
}

int pj_ensemble_metadata(const pj_ensemble* ens, char** json) {
    return guarded([&] {
        need(ens, "ensemble");
        need(json, "out");
        nlohmann::ordered_json j;
        j["format"] = "purejump.ensemble";
        j["version"] = 1;
        j["spec"] = ens->spec.name;
        j["spec_digest"] = ens->ens.spec_digest;
        j["seed"] = ens->ens.seed;
        j["paths"] = ens->ens.paths.size();
        j["levels"] = ens->ens.levels;
        j["horizon"] = ens->spec.horizon;
        j["columns"] = {"t", "value", "jump"};
        put(json, j.dump(2));
    });
}

void pj_ensemble_free(pj_ensemble* ens) { delete ens; }

int pj_star_nu_csv(const pj_spec* spec, const char* eta, double T, int grid, char** csv) {
    return guarded([&] {
        need(spec, "spec");
        need(eta, "eta");
        need(csv, "out");
        if (grid < 1) purejump::fail(ErrorCode::InvalidArgument, "grid must be positive");
        const auto c = purejump::star_nu(purejump::parse_integrand(eta), spec->spec, T, grid);
        put(csv, fv_csv(c, T, grid));
    });
}

int pj_star_mu_csv(const pj_spec* spec, const char* eta, const char* zeta, uint64_t seed, uint64_t index, int grid,
                   char** csv) {
    return guarded([&] {
        need(spec, "spec");
        need(eta, "eta");
        need(csv, "out");
        const auto& comp = spec->spec;
        const purejump::SamplePath y = purejump::sample_path(comp, seed, index);
        purejump::SamplePath r = purejump::star_mu_on_path(purejump::parse_integrand(eta), y, comp);
        if (zeta) r = purejump::stoch_integral(purejump::parse_time_function(zeta), r);
        put(csv, purejump::path_csv(r, grid));
    });
}

int pj_transform_csv(const pj_spec* spec, const char* f, uint64_t seed, uint64_t index, char** csv,
                     double* max_discrepancy) {
    return guarded([&] {
        need(spec, "spec");
        need(f, "f");
        need(csv, "out");
        const auto& comp = spec->spec;
        const purejump::SamplePath y = purejump::sample_path(comp, seed, index);
        const auto r = purejump::transform_path(purejump::parse_smooth_function(f), y, &comp);
        std::ostringstream os;
        os.precision(17);
        os << "t,direct,star\n";
        for (std::size_t i = 0; i < r.times.size(); ++i)
            os << r.times[i] << "," << r.direct[i] << "," << r.star.value(r.times[i]) << "\n";
        put(csv, os.str());
        if (max_discrepancy) *max_discrepancy = r.max_discrepancy;
    });
}

int pj_decompose(const pj_spec* spec, char** qc_json, char** dp_json, char** text) {
    return guarded([&] {
        need(spec, "spec");
        const auto d = purejump::split_qc_dp(spec->spec);
        put(qc_json, purejump::config::to_json(d.qc));
        put(dp_json, purejump::config::to_json(d.dp));
        put(text, d.to_text());
    });
}

int pj_converge(const pj_spec* spec, const int* levels, size_t n_levels, double t, size_t paths, uint64_t seed,
                int* sandwich_ok, char** text, char** json) {
    return guarded([&] {
        need(spec, "spec");
        need(levels, "levels");
        if (n_levels == 0) purejump::fail(ErrorCode::InvalidArgument, "no level counts given");
        const std::vector<int> ls(levels, levels + n_levels);
        const auto rep = purejump::convergence_report(spec->spec, ls, t, paths, seed);
        if (sandwich_ok) *sandwich_ok = rep.sandwich_holds() ? 1 : 0;
        put(text, rep.to_text());
        put(json, rep.to_json());
    });
}

int pj_scenario_ids(char** out) {
    return guarded([&] {
        need(out, "out");
        put(out, join_lines(purejump::paperlab::scenario_ids()));
    });
}

int pj_reproduce(const char* id, uint64_t seed, int* pass, char** text, char** json) {
    return guarded([&] {
        need(id, "id");
        const auto r = purejump::paperlab::reproduce(id, seed);
        if (pass) *pass = r.pass() ? 1 : 0;
        put(text, r.to_text());
        put(json, r.to_json());
    });
}

int pj_run_all(uint64_t seed, int* pass, char** text) {
    return guarded([&] {
        const auto s = purejump::paperlab::run_all(seed);
        if (pass) *pass = s.pass() ? 1 : 0;
        std::string t;
        for (const auto& r : s.reports) t += r.to_text();
        t += s.to_text();
        put(text, t);
    });
}

int pj_drift_pinning(int K, double* min_ratio, int* at_least_half) {
    return guarded([&] {
        const auto r = purejump::paperlab::drift_pinning_bruteforce(K);
        if (min_ratio) *min_ratio = r.min_ratio;
        if (at_least_half) *at_least_half = r.at_least_half ? 1 : 0;
    });
}

}  // extern "C"

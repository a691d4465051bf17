#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "purejump/purejump.h"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitError = 2;

struct Failure {
    int status;
    std::string message;
};

void check(int status) {
    if (status != PJ_OK) throw Failure{status, pj_last_error()};
}

struct Str {
    char* p = nullptr;
    ~Str() { pj_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

using SpecPtr = std::unique_ptr<pj_spec, decltype(&pj_spec_free)>;
using EnsPtr = std::unique_ptr<pj_ensemble, decltype(&pj_ensemble_free)>;

/// A file path, or preset:<name>.
SpecPtr open_spec(const std::string& arg) {
    pj_spec* s = nullptr;
    const std::string tag = "preset:";
    if (arg.rfind(tag, 0) == 0) check(pj_spec_preset(arg.substr(tag.size()).c_str(), &s));
    else check(pj_spec_load(arg.c_str(), &s));
    return SpecPtr(s, pj_spec_free);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Failure{PJ_E_IO, "cannot write " + p.string()};
    f << text;
    if (!f) throw Failure{PJ_E_IO, "write failed for " + p.string()};
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) std::cout << text;
    else write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pure-jump semimartingale toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pj_version());

    std::string spec_arg, out, json_out, eta, zeta, fname, levels_arg, id;
    std::uint64_t seed = 42;
    std::size_t paths = 100;
    int levels = -1, grid = 256;
    unsigned threads = 0;
    double T = -1.0, t = -1.0;
    std::uint64_t index = 0;
    bool as_json = false;

    auto* classify = app.add_subcommand("classify", "Membership in J1..J6 with witnesses");
    classify->add_option("spec", spec_arg, "spec file or preset:<name>")->required();
    classify->add_flag("--json", as_json, "print the machine-readable report");
    classify->add_option("--out", json_out, "also write the JSON report here");

    auto* simulate = app.add_subcommand("simulate", "Simulate an ensemble of truncated jump sums");
    simulate->add_option("spec", spec_arg, "spec file or preset:<name>")->required();
    simulate->add_option("--paths", paths, "number of paths")->capture_default_str();
    simulate->add_option("--seed", seed, "master seed")->capture_default_str();
    simulate->add_option("--levels", levels, "truncation levels (default: the spec's scheme)");
    simulate->add_option("--grid", grid, "uniform grid points per CSV")->capture_default_str();
    simulate->add_option("--threads", threads, "worker threads (0: all cores)");
    simulate->add_option("--out", out, "directory for path CSVs and ensemble.json");

    auto* integrate = app.add_subcommand("integrate", "Star integrals against nu or mu");
    integrate->add_option("spec", spec_arg, "spec file or preset:<name>")->required();
    integrate->add_option("--eta", eta, "integrand, e.g. x, x^2, |x|^0.5@|x|<=1");
    auto* zopt = integrate->add_option("--zeta", zeta, "time integrand applied to eta * mu");
    auto* fopt = integrate->add_option("--f", fname, "smooth transform: x, x^2, sin, cos, exp");
    zopt->excludes(fopt);
    integrate->add_option("--T", T, "horizon of eta * nu (default: the spec's)");
    integrate->add_option("--seed", seed, "seed of the simulated path")->capture_default_str();
    integrate->add_option("--index", index, "path index")->capture_default_str();
    integrate->add_option("--grid", grid, "grid points")->capture_default_str();
    integrate->add_option("--out", out, "CSV output file");

    auto* decompose = app.add_subcommand("decompose", "Quasi-left-continuous and predictable-jump parts");
    decompose->add_option("spec", spec_arg, "spec file or preset:<name>")->required();
    decompose->add_option("--out", out, "directory for qc.json and dp.json");

    auto* converge = app.add_subcommand("converge", "Convergence of partial sums in ucp and Emery bounds");
    converge->add_option("spec", spec_arg, "spec file or preset:<name>")->required();
    converge->add_option("--levels", levels_arg, "comma-separated level counts")->required();
    converge->add_option("--t", t, "time of the functionals (default: the spec's horizon)");
    converge->add_option("--paths", paths, "number of paths")->capture_default_str();
    converge->add_option("--seed", seed, "master seed")->capture_default_str();
    converge->add_option("--json", json_out, "write the JSON report here");

    auto* reproduce = app.add_subcommand("reproduce", "Run one scenario");
    reproduce->add_option("scenario", id, "scenario id")->required();
    reproduce->add_option("--seed", seed, "master seed")->capture_default_str();
    reproduce->add_option("--out", out, "write the JSON report here");

    auto* run_all = app.add_subcommand("run-all", "Run every scenario");
    run_all->add_option("--seed", seed, "master seed")->capture_default_str();

    auto* presets = app.add_subcommand("presets", "List built-in specs");

    auto* export_cmd = app.add_subcommand("export", "Print a spec as canonical JSON");
    export_cmd->add_option("spec", spec_arg, "spec file or preset:<name>")->required();
    export_cmd->add_option("--out", out, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify) {
            auto s = open_spec(spec_arg);
            Str text, json;
            int flags[6];
            check(pj_classify(s.get(), flags, &text.p, &json.p));
            std::cout << (as_json ? json.str() + "\n" : text.str());
            if (!json_out.empty()) write_file(json_out, json.str() + "\n");
        } else if (*simulate) {
            auto s = open_spec(spec_arg);
            pj_ensemble* e = nullptr;
            check(pj_simulate(s.get(), paths, seed, levels, threads, &e));
            EnsPtr ens(e, pj_ensemble_free);
            Str meta;
            check(pj_ensemble_metadata(ens.get(), &meta.p));
            if (out.empty()) {
                std::cout << meta.str() << "\n";
            } else {
                std::filesystem::create_directories(out);
                for (std::size_t i = 0; i < pj_ensemble_size(ens.get()); ++i) {
                    Str csv;
                    check(pj_ensemble_path_csv(ens.get(), i, grid, &csv.p));
                    char name[32];
                    std::snprintf(name, sizeof name, "path_%06zu.csv", i);
                    write_file(std::filesystem::path(out) / name, csv.str());
                }
                write_file(std::filesystem::path(out) / "ensemble.json", meta.str() + "\n");
                std::cout << "wrote " << pj_ensemble_size(ens.get()) << " paths to " << out << "\n";
            }
        } else if (*integrate) {
            auto s = open_spec(spec_arg);
            Str csv;
            if (!fname.empty()) {
                double disc = 0.0;
                check(pj_transform_csv(s.get(), fname.c_str(), seed, index, &csv.p, &disc));
                std::cerr << "max discrepancy " << disc << "\n";
            } else {
                if (eta.empty()) throw Failure{PJ_E_INVALID_ARGUMENT, "--eta is required unless --f is given"};
                if (!zeta.empty()) {
                    check(pj_star_mu_csv(s.get(), eta.c_str(), zeta.c_str(), seed, index, grid, &csv.p));
                } else {
                    double horizon = T;
                    if (horizon < 0.0) check(pj_spec_horizon(s.get(), &horizon));
                    check(pj_star_nu_csv(s.get(), eta.c_str(), horizon, grid, &csv.p));
                }
            }
            emit(csv.str(), out);
        } else if (*decompose) {
            auto s = open_spec(spec_arg);
            Str qc, dp, text;
            check(pj_decompose(s.get(), &qc.p, &dp.p, &text.p));
            std::cout << text.str();
            if (!out.empty()) {
                std::filesystem::create_directories(out);
                write_file(std::filesystem::path(out) / "qc.json", qc.str() + "\n");
                write_file(std::filesystem::path(out) / "dp.json", dp.str() + "\n");
            }
        } else if (*converge) {
            auto s = open_spec(spec_arg);
            std::vector<int> ls;
            std::size_t pos = 0;
            while (pos <= levels_arg.size()) {
                const std::size_t end = levels_arg.find(',', pos);
                const std::string tok = levels_arg.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
                try {
                    ls.push_back(std::stoi(tok));
                } catch (const std::exception&) {
                    throw Failure{PJ_E_INVALID_ARGUMENT, "bad level count '" + tok + "'"};
                }
                if (end == std::string::npos) break;
                pos = end + 1;
            }
            double tt = t;
            if (tt < 0.0) check(pj_spec_horizon(s.get(), &tt));
            Str text, json;
            int ok = 0;
            check(pj_converge(s.get(), ls.data(), ls.size(), tt, paths, seed, &ok, &text.p, &json.p));
            std::cout << text.str();
            if (!json_out.empty()) write_file(json_out, json.str() + "\n");
            if (!ok) return kExitChecksFailed;
        } else if (*reproduce) {
            Str text, json;
            int pass = 0;
            check(pj_reproduce(id.c_str(), seed, &pass, &text.p, &json.p));
            std::cout << text.str();
            if (!out.empty()) write_file(out, json.str() + "\n");
            return pass ? 0 : kExitChecksFailed;
        } else if (*run_all) {
            Str text;
            int pass = 0;
            check(pj_run_all(seed, &pass, &text.p));
            std::cout << text.str();
            return pass ? 0 : kExitChecksFailed;
        } else if (*export_cmd) {
            auto s = open_spec(spec_arg);
            Str json;
            check(pj_spec_to_json(s.get(), &json.p));
            emit(json.str() + "\n", out);
        } else if (*presets) {
            Str names;
            check(pj_preset_names(&names.p));
            std::cout << names.str();
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        if (f.message.find(pj_status_name(f.status)) == std::string::npos)
            std::cerr << "status: " << pj_status_name(f.status) << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}

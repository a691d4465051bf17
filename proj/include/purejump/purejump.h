#ifndef PUREJUMP_H
#define PUREJUMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PJ_API __declspec(dllexport)
#else
#define PJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The nonzero values match the library's error codes. */
enum pj_status {
    PJ_OK = 0,
    PJ_E_INVALID_ARGUMENT = 1,
    PJ_E_INVALID_SPEC,
    PJ_E_PARSE,
    PJ_E_INVALID_REGION,
    PJ_E_EMPTY_REGION,
    PJ_E_QUADRATURE,
    PJ_E_UNKNOWN_ASYMPTOTICS,
    PJ_E_SHELL_OVERFLOW,
    PJ_E_INVALID_SCHEME,
    PJ_E_SCHEME_MISMATCH,
    PJ_E_NOT_SIGMA_INTEGRABLE,
    PJ_E_NOT_INTEGRABLE,
    PJ_E_TRANSFORM_DIVERGENCE,
    PJ_E_UNCOUPLED,
    PJ_E_DECOMPOSITION_UNAVAILABLE,
    PJ_E_DRIFT_MISMATCH,
    PJ_E_HYPOTHESIS,
    PJ_E_ROOT_FIND,
    PJ_E_BUDGET,
    PJ_E_UNKNOWN_SCENARIO,
    PJ_E_IO,
    PJ_E_INTERNAL = 99
};

/* Membership flags. */
enum pj_membership { PJ_MEMBER = 0, PJ_NON_MEMBER = 1, PJ_UNDECIDED = 2 };

typedef struct pj_spec pj_spec;
typedef struct pj_ensemble pj_ensemble;

PJ_API const char* pj_version(void);
PJ_API const char* pj_status_name(int status);
/* Message of the last failed call on this thread; "" after success. */
PJ_API const char* pj_last_error(void);
/* Frees strings returned through char** arguments. */
PJ_API void pj_string_free(char* s);

/* ---- specs ---- */
PJ_API int pj_spec_parse(const char* json, pj_spec** out);
PJ_API int pj_spec_load(const char* path, pj_spec** out);
PJ_API int pj_spec_preset(const char* name, pj_spec** out);
/* Newline-separated preset names. */
PJ_API int pj_preset_names(char** out);
PJ_API int pj_spec_to_json(const pj_spec* spec, char** out);
PJ_API int pj_spec_horizon(const pj_spec* spec, double* out);
PJ_API void pj_spec_free(pj_spec* spec);

/* ---- classify ---- */
/* flags[i] is the pj_membership of J(i+1). text and json may be NULL. */
PJ_API int pj_classify(const pj_spec* spec, int flags[6], char** text, char** json);

/* ---- simulate ---- */
/* levels < 0 keeps the spec's scheme. threads 0: all cores. */
PJ_API int pj_simulate(const pj_spec* spec, size_t paths, uint64_t seed, int levels, unsigned threads,
                       pj_ensemble** out);
PJ_API size_t pj_ensemble_size(const pj_ensemble* ens);
PJ_API int pj_ensemble_value(const pj_ensemble* ens, size_t path, double t, double* out);
PJ_API int pj_ensemble_event_count(const pj_ensemble* ens, size_t path, size_t* out);
PJ_API int pj_ensemble_event(const pj_ensemble* ens, size_t path, size_t i, double* t, double* dx);
/* Columns t, value, jump. */
PJ_API int pj_ensemble_path_csv(const pj_ensemble* ens, size_t path, int grid, char** out);
/* Seed, size, levels, spec digest, horizon. */
PJ_API int pj_ensemble_metadata(const pj_ensemble* ens, char** json);
PJ_API void pj_ensemble_free(pj_ensemble* ens);

/* ---- integrals ---- */
/* eta * nu on [0, T]: CSV with columns t, value. */
PJ_API int pj_star_nu_csv(const pj_spec* spec, const char* eta, double T, int grid, char** csv);
/* eta * mu on path `index` of a fresh simulation; zeta (may be NULL) is then integrated against it. */
PJ_API int pj_star_mu_csv(const pj_spec* spec, const char* eta, const char* zeta, uint64_t seed, uint64_t index,
                          int grid, char** csv);
/* f(Y) against f(Y_0) + xi * mu: CSV t, direct, star; max_discrepancy may be NULL. */
PJ_API int pj_transform_csv(const pj_spec* spec, const char* f, uint64_t seed, uint64_t index, char** csv,
                            double* max_discrepancy);

/* ---- decompose ---- */
PJ_API int pj_decompose(const pj_spec* spec, char** qc_json, char** dp_json, char** text);

/* ---- converge ---- */
PJ_API int pj_converge(const pj_spec* spec, const int* levels, size_t n_levels, double t, size_t paths,
                       uint64_t seed, int* sandwich_ok, char** text, char** json);

/* ---- paperlab ---- */
/* Newline-separated scenario ids. */
PJ_API int pj_scenario_ids(char** out);
PJ_API int pj_reproduce(const char* id, uint64_t seed, int* pass, char** text, char** json);
PJ_API int pj_run_all(uint64_t seed, int* pass, char** text);
PJ_API int pj_drift_pinning(int K, double* min_ratio, int* at_least_half);

#ifdef __cplusplus
}
#endif

#endif

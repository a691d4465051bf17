#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "purejump/kernel.hpp"

namespace purejump::paperlab {

// ---- drift pinning -----------------------------------------------------------

struct PinningReport {
    int K = 0;
    std::uint64_t pairs = 0;       // selections with nonempty symmetric difference
    std::string min_numerator;     // |sum| at the minimum, exact
    std::string min_denominator;   // 3^k at the minimum, exact
    double min_ratio = 0.0;
    int min_index = 0;             // k at the minimum
    std::vector<int> worst_plus, worst_minus;
    bool at_least_half = false;    // 2 |sum| >= 3^k for every selection, exact
};

/// Exhaustive min over (A+, A-) of |sum_{A+} 3^j - sum_{A-} 3^j| / 3^k, k the top index of the
/// symmetric difference. BudgetExceeded for K > 12.
PinningReport drift_pinning_bruteforce(int K);

// ---- drift steering ----------------------------------------------------------

struct SteerStep {
    int k = 0;
    double f = 0.0, g = 0.0;
    double beta_k = 0.0;
    double atom_term = 0.0;  // f F({f})
    double residual = 0.0;   // |beta_k - beta|
};

struct SteerCell {
    double t0 = 0.0, t1 = 0.0;
    bool in_d = false;  // truncated mean finite: drift is the mean, no steering
    double c = 2.0, d = 1.0;
    double target = 0.0;
    std::vector<SteerStep> steps;
};

struct TruncationPolicy {
    double beta = 0.0;
    int K = 0;
    bool mirrored = false;  // built on x -> -x because the positive side carries the atoms
    std::vector<SteerCell> cells;
    std::vector<std::string> notes;

    double max_residual() const;
    /// beta_k in [beta, beta + f F({f})] up to tol, on steered cells.
    bool within_band(double tol = 1e-12) const;
    /// f and g nonincreasing in k and strictly positive.
    bool monotone() const;
    std::string to_text() const;
};

/// Thresholds g = d ^ 1/k and f solving the balance against beta, per time cell.
/// HypothesisViolation when the one-sided atom limsups both stay positive or D+ != D-.
TruncationPolicy steer_drift(const CompensatorSpec& comp, double beta_target, int K, int component = 0);

// ---- threshold construction for the ucp class ---------------------------------

struct PiecewiseLinear {
    std::vector<double> t, x;
    double operator()(double s) const;
};

/// Gaussian increments on mesh 1/steps, frozen at +-1 after the first grid time with |W| > 1.
PiecewiseLinear stopped_brownian(double T, int steps, std::mt19937_64& rng);

/// B^(n): B_0 = B_{1/n} = 0, B_{(k+1)/n} = W_{k/n}, linear in between.
PiecewiseLinear trailing_drift(const PiecewiseLinear& w, int n, double T);

struct ThresholdUpdate {
    double log_f = 0.0, log_g = 0.0;
    double residual = 0.0;
};

/// One refinement step: b_bar > 0 moves f below f_bar, b_bar < 0 moves g below g_bar.
ThresholdUpdate prop61_step(const KernelSpec& F, double log_fbar, double log_gbar, double b_bar);

struct ThresholdCell {
    double t0 = 0.0, t1 = 0.0;
    double log_f = 0.0, log_g = 0.0;
    double b = 0.0;
    double residual = 0.0;  // |drift of the thresholds - b|, relative to max(1, |b|)
};

struct ThresholdLevel {
    int n = 0;
    std::vector<ThresholdCell> cells;
    double max_residual = 0.0;
    double max_log_threshold = 0.0;  // max of log f, log g over cells
};

struct Prop61Result {
    std::vector<ThresholdLevel> levels;  // n = 1..N
    bool nonincreasing = true;
    bool within_mesh = true;  // every threshold in (0, 1/n]
    double max_residual = 0.0;
};

/// F: symmetric atomless power law with alpha >= 1 and cutoff <= 1.
Prop61Result prop61_thresholds(const KernelSpec& F, const PiecewiseLinear& w, int N, double T = 1.0);

// ---- scenarios -------------------------------------------------------------------

struct Check {
    std::string name;
    std::string expected;
    std::string computed;
    double tolerance = 0.0;
    bool pass = false;
};

struct ScenarioReport {
    std::string id;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    double runtime = 0.0;  // seconds

    bool pass() const;
    std::string to_text() const;
    /// Runtime is left out unless asked for, so equal seeds give equal reports.
    std::string to_json(bool with_runtime = false) const;
};

const std::vector<std::string>& scenario_ids();

/// UnknownScenario for ids outside scenario_ids().
ScenarioReport reproduce(const std::string& id, std::uint64_t seed = 42);

struct RunSummary {
    std::vector<ScenarioReport> reports;
    bool pass() const;
    std::string to_text() const;
};

RunSummary run_all(std::uint64_t seed = 42);

}  // namespace purejump::paperlab

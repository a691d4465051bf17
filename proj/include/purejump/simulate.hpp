#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "purejump/kernel.hpp"
#include "purejump/path.hpp"

namespace purejump {

struct SimOptions {
    int levels = -1;               // -1: the spec's scheme
    double shell_budget = 1e7;     // max expected events per level and component
    int grid = 256;                // uniform knots of the deterministic curves
    std::vector<double> extra_knots;
    std::optional<DriftSpec> drift;
    std::optional<double> horizon;
    unsigned threads = 0;          // 0: hardware concurrency
};

/// Independent stream for (seed, path index, component).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index, int component);

/// Knots of the deterministic curves: uniform grid, kernel breakpoints, extra knots.
std::vector<double> simulation_knots(const CompensatorSpec& comp, const SimOptions& opts = {});

std::shared_ptr<const LevelTable> build_level_table(const CompensatorSpec& comp,
                                                    const SimOptions& opts = {});

SamplePath sample_path(const CompensatorSpec& comp, std::uint64_t seed, std::uint64_t index = 0,
                       const SimOptions& opts = {});
/// Same, reusing a table built from the same spec and options.
SamplePath sample_path(const CompensatorSpec& comp, const std::shared_ptr<const LevelTable>& table,
                       std::uint64_t seed, std::uint64_t index, const SimOptions& opts = {});

/// Paths 0..n-1; identical for any thread count.
Ensemble simulate_ensemble(const CompensatorSpec& comp, std::size_t n, std::uint64_t seed,
                           const SimOptions& opts = {});

/// Levels 0..n-1 of a level-structured path, with the matching deterministic part.
SamplePath partial_sum_path(const SamplePath& path, int n);

SamplePath intro_process(std::uint64_t seed, long n_max = 100000);
/// X_2 for paths 0..n-1 of intro_process, without storing paths.
std::vector<double> intro_terminal_values(std::size_t n, std::uint64_t seed, long n_max = 100000,
                                          unsigned threads = 0);

/// phi^power N_{tan t} on [0, T] (time_changed), or phi(t)^power N_t.
SamplePath poisson_phi_process(int power, double T, std::uint64_t seed, bool time_changed = true);

/// Columns t, value, jump on the union of event times and a uniform grid.
std::string path_csv(const SamplePath& path, int grid = 256);

}  // namespace purejump

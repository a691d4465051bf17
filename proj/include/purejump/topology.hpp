#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "purejump/classify.hpp"
#include "purejump/path.hpp"
#include "purejump/time_function.hpp"

namespace purejump {

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

/// Mean and standard error with compensated sums, in index order.
Estimate estimate(const std::vector<double>& samples);

/// E[sup_{s<=t} |X_s - Y_s| ^ 1] over coupled ensembles.
Estimate ucp_distance(const Ensemble& x, const Ensemble& y, double t, int grid = 256);

struct FamilyMember {
    std::string name;
    enum class Kind { Fixed, DriftSign } kind = Kind::Fixed;
    TimeFunction zeta = TimeFunction::constant(1.0);
    double sign = 1.0;
};

/// +-1, +-sign of the residual drift rate, +-1_(a,b] on dyadic cells of [0,t] to depth 4,
/// and a sign alternating over the depth-4 cells.
std::vector<FamilyMember> default_family(double t);

struct LowerBound {
    Estimate best;
    std::string member;
    std::vector<std::pair<std::string, Estimate>> all;
};

/// max over the family of E[|zeta_0 (X_0 - Y_0) + zeta.(X - Y)_t| ^ 1].
LowerBound emery_lower(const Ensemble& x, const Ensemble& y, double t,
                       const std::vector<FamilyMember>& family = {});

struct UpperBound {
    Estimate total;
    Estimate drift_term;  // E[(int_0^t |dB|) ^ 1]
    Estimate qv_term;     // E[sqrt([M,M]_t) ^ 1]
};

/// Upper functional of residual paths R = M + B.
UpperBound emery_upper(const std::vector<SamplePath>& residual, double t);

/// X - Y path by path.
std::vector<SamplePath> residuals(const Ensemble& x, const Ensemble& y);

struct SeriesVerdict {
    Membership flag = Membership::Undecided;  // Member: the level series converges
    FlagResult qv;
    FlagResult drift;
    std::string to_text() const;
};

/// Summability of expected level QV and total-variation convergence of the level drifts.
SeriesVerdict series_converges(const CompensatorSpec& comp, double t);

struct ConvergenceRow {
    int levels = 0;
    Estimate ucp;
    LowerBound lower;
    UpperBound upper;
};

struct ConvergenceReport {
    std::string spec;
    double t = 0.0;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    int full_levels = 0;
    std::vector<ConvergenceRow> rows;
    SeriesVerdict series;

    /// lower <= upper + 2 stderr in every row.
    bool sandwich_holds() const;
    std::string to_text() const;
    std::string to_json() const;
};

/// Per-path functionals of residual paths for several rows (level counts), reduced in path order.
class ResidualAccumulator {
public:
    ResidualAccumulator(std::vector<int> labels, double t, std::size_t paths);
    void add(std::size_t row, std::size_t path, const SamplePath& residual);
    std::vector<ConvergenceRow> rows() const;

private:
    std::vector<int> labels_;
    double t_;
    std::vector<FamilyMember> family_;
    std::vector<std::vector<double>> ucp_, drift_, qv_;
    std::vector<std::vector<std::vector<double>>> lower_;
};

/// Simulates the full path with max(levels) levels and compares the partial sums S^(n).
ConvergenceReport convergence_report(const CompensatorSpec& comp, const std::vector<int>& levels, double t,
                                     std::size_t paths, std::uint64_t seed);

}  // namespace purejump

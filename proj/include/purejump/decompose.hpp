#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "purejump/classify.hpp"
#include "purejump/path.hpp"
#include "purejump/topology.hpp"

namespace purejump {

struct PredictableTime {
    double t = 0.0;
    double weight = 0.0;
    int component = 0;
    long atom = 0;
};

struct Decomposition {
    CompensatorSpec qc;                  // continuous clocks
    CompensatorSpec dp;                  // fixed-time clocks
    std::vector<PredictableTime> times;  // decreasing weight, ties by time

    std::string to_text() const;
};

/// Components keep their ids, so coupled seeds give the same jumps in each part.
Decomposition split_qc_dp(const CompensatorSpec& comp);

struct SigmaFvWitness {
    Membership flag = Membership::Member;
    std::vector<PredictableTime> times;
    std::string detail;

    /// D_n: drop every predictable time ranked n or later (1-based), as a spec.
    CompensatorSpec restricted(const CompensatorSpec& dp, long n) const;
};

SigmaFvWitness dp_is_sigma_fv(const Decomposition& d);

/// Jumps and drift atoms at the first n ranked times of order.
SamplePath exhaustion_partial(const SamplePath& x, const std::vector<PredictableTime>& order, long n);

/// Residuals X - T_n for each n, streamed path by path.
ConvergenceReport predictable_exhaustion_converges(const Decomposition& d, const std::vector<int>& ns, double t,
                                                   std::size_t paths, std::uint64_t seed,
                                                   std::uint64_t shuffle_seed = 0);

struct TruncationDrift {
    FvCurve drift;                                  // B^{X[1]} as stored
    std::vector<std::pair<double, double>> density;  // (t, beta_t)
    bool verified = false;
    double max_residual = 0.0;
    std::string detail;
};

/// Stored drift against the clock integral of the truncated mean; DriftMismatch on failure.
TruncationDrift drift_of_truncation(const SamplePath& path, const CompensatorSpec& comp, double tol = 1e-9);

}  // namespace purejump
